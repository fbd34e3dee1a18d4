#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"

namespace bootcmp {

enum class FileFormat { tsv, csv, json_lines };

/// The canonical interchange format is TSV (id<TAB>value); CSV and JSON-lines
/// are accepted alternatives. Chosen by extension unless forced.
inline FileFormat detect_format(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") return FileFormat::csv;
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return FileFormat::json_lines;
    return FileFormat::tsv;
}

/// One parsed prediction file: aligned ids and values, the value kind decided
/// per file. A text file is real-valued iff every value parses as a finite
/// number; JSON-lines files carry explicit types and must not mix them.
struct PredictionFile {
    std::filesystem::path path;
    FileFormat format = FileFormat::tsv;
    std::vector<std::string> ids;
    ValueKind kind = ValueKind::categorical;
    std::vector<std::string> labels;  // when categorical
    std::vector<double> reals;        // when real

    std::size_t size() const { return ids.size(); }

    LabelValue value(std::size_t row) const {
        if (kind == ValueKind::categorical) return labels.at(row);
        return reals.at(row);
    }
};

namespace detail {

inline std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline bool parse_finite_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const auto tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
    }
    return fields;
}

/// Minimal RFC-4180 field splitting: commas separate, double quotes group,
/// doubled quotes escape.
inline std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw InputError("unterminated quote in " + where);
    fields.push_back(field);
    return fields;
}

}  // namespace detail

/// Reads one prediction file into aligned (id, value) columns. Rows that do
/// not parse, duplicate ids, and mixed JSON value types are hard errors that
/// name the file and the offending row.
inline PredictionFile read_prediction_file(const std::filesystem::path& path,
                                           FileFormat format) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");

    PredictionFile file;
    file.path = path;
    file.format = format;

    std::vector<std::string> raw_values;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_row = true;
    int json_type_seen = -1;  // 0 = string, 1 = number

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);

        if (format == FileFormat::json_lines) {
            nlohmann::json row;
            try {
                row = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw InputError("bad JSON at " + where + ": " + e.what());
            }
            if (!row.is_object() || !row.contains("id") || !row.contains("value"))
                throw InputError("row at " + where + " must be an object with 'id' and 'value'");
            if (!row["id"].is_string())
                throw InputError("row at " + where + " has a non-string id");
            file.ids.push_back(row["id"].get<std::string>());
            const auto& value = row["value"];
            if (value.is_string()) {
                if (json_type_seen == 1)
                    throw InputError("mixed value types in '" + path.string() +
                                     "': string at line " + std::to_string(line_no) +
                                     " after numbers");
                json_type_seen = 0;
                raw_values.push_back(value.get<std::string>());
            } else if (value.is_number()) {
                if (json_type_seen == 0)
                    throw InputError("mixed value types in '" + path.string() + "': number at line " +
                                     std::to_string(line_no) + " after strings");
                json_type_seen = 1;
                file.reals.push_back(value.get<double>());
            } else {
                throw InputError("row at " + where + " has a value that is neither string nor number");
            }
            continue;
        }

        if (line[0] == '#') continue;
        std::vector<std::string> fields = format == FileFormat::csv
                                              ? detail::split_csv(line, where)
                                              : detail::split_tsv(line);
        if (fields.size() != 2)
            throw InputError("expected 2 columns (id, value) at " + where + ", got " +
                             std::to_string(fields.size()));
        const std::string id = detail::strip(fields[0]);
        const std::string value = detail::strip(fields[1]);
        if (first_data_row) {
            first_data_row = false;
            std::string id_lower = id, value_lower = value;
            std::transform(id_lower.begin(), id_lower.end(), id_lower.begin(), ::tolower);
            std::transform(value_lower.begin(), value_lower.end(), value_lower.begin(), ::tolower);
            if (id_lower == "id" && value_lower == "value") continue;  // optional header
        }
        if (id.empty()) throw InputError("empty instance id at " + where);
        file.ids.push_back(id);
        raw_values.push_back(value);
    }

    if (file.ids.empty()) throw InputError("no data rows in '" + path.string() + "'");

    if (format == FileFormat::json_lines) {
        file.kind = json_type_seen == 1 ? ValueKind::real : ValueKind::categorical;
        if (file.kind == ValueKind::categorical) file.labels = std::move(raw_values);
        return file;
    }

    // text formats: real iff every value parses as a finite number
    std::vector<double> parsed(raw_values.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < raw_values.size() && all_numeric; ++i)
        all_numeric = detail::parse_finite_double(raw_values[i], parsed[i]);
    if (all_numeric) {
        file.kind = ValueKind::real;
        file.reals = std::move(parsed);
    } else {
        file.kind = ValueKind::categorical;
        file.labels = std::move(raw_values);
    }
    return file;
}

/// Joins gold and per-system prediction files into an evaluation set, keyed
/// by instance id: the join is order-independent, every system must cover
/// every gold id exactly once, and all files must agree on the value kind.
inline PairedEvaluationSet load_evaluation(
    const std::filesystem::path& gold_path,
    const std::vector<std::pair<std::string, std::filesystem::path>>& system_files) {
    const PredictionFile gold = read_prediction_file(gold_path, detect_format(gold_path));

    std::vector<PredictionFile> systems;
    systems.reserve(system_files.size());
    for (const auto& [name, path] : system_files) {
        PredictionFile f = read_prediction_file(path, detect_format(path));
        if (f.kind != gold.kind)
            throw InputError("mixed value types: system '" + name + "' (" + path.string() +
                             ") holds " + to_string(f.kind) + " values but gold (" +
                             gold_path.string() + ") is " + to_string(gold.kind));
        systems.push_back(std::move(f));
    }

    // shared interning table for the categorical case
    std::vector<std::string> label_table;
    std::unordered_map<std::string, std::int32_t> code_of;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = code_of.emplace(s, static_cast<std::int32_t>(label_table.size()));
        if (inserted) label_table.push_back(s);
        return it->second;
    };

    ValueColumn gold_column =
        gold.kind == ValueKind::categorical
            ? [&] {
                  std::vector<std::int32_t> codes;
                  codes.reserve(gold.labels.size());
                  for (const auto& s : gold.labels) codes.push_back(intern(s));
                  return ValueColumn::categorical(std::move(codes));
              }()
            : ValueColumn::real(gold.reals);

    PairedEvaluationSet eval(gold.ids, std::move(gold_column));

    std::unordered_map<std::string, std::size_t> gold_row;
    gold_row.reserve(gold.ids.size());
    for (std::size_t i = 0; i < gold.ids.size(); ++i) gold_row.emplace(gold.ids[i], i);

    for (std::size_t s = 0; s < systems.size(); ++s) {
        const std::string& name = system_files[s].first;
        const PredictionFile& f = systems[s];
        std::unordered_map<std::string, std::size_t> row_of;
        row_of.reserve(f.ids.size());
        for (std::size_t i = 0; i < f.ids.size(); ++i) {
            if (!row_of.emplace(f.ids[i], i).second)
                throw InputError("duplicate instance id '" + f.ids[i] + "' in '" +
                                 f.path.string() + "'");
        }
        for (const auto& id : f.ids) {
            if (!gold_row.count(id))
                throw InputError("prediction for unknown instance id '" + id + "' in '" +
                                 f.path.string() + "'");
        }

        if (f.kind == ValueKind::categorical) {
            std::vector<std::int32_t> codes;
            codes.reserve(gold.ids.size());
            for (const auto& id : gold.ids) {
                auto it = row_of.find(id);
                if (it == row_of.end())
                    throw InputError("system '" + name + "' (" + f.path.string() +
                                     ") is missing instance id '" + id + "'");
                codes.push_back(intern(f.labels[it->second]));
            }
            eval.add_system(name, ValueColumn::categorical(std::move(codes)));
        } else {
            std::vector<double> values;
            values.reserve(gold.ids.size());
            for (const auto& id : gold.ids) {
                auto it = row_of.find(id);
                if (it == row_of.end())
                    throw InputError("system '" + name + "' (" + f.path.string() +
                                     ") is missing instance id '" + id + "'");
                values.push_back(f.reals[it->second]);
            }
            eval.add_system(name, ValueColumn::real(std::move(values)));
        }
    }

    eval.set_label_table(std::move(label_table));
    return eval;
}

/// Lists the run subdirectories of a repeated-CV directory in lexicographic
/// order (the run order is part of the result, so it must be deterministic).
inline std::vector<std::filesystem::path> list_run_directories(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw InputError("'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> runs;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_directory()) runs.push_back(entry.path());
    std::sort(runs.begin(), runs.end());
    if (runs.empty()) throw InputError("'" + dir.string() + "' contains no run subdirectories");
    return runs;
}

}  // namespace bootcmp
