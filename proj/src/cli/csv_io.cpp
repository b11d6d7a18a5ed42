/*
   Copyright 2026 The treeorder Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "treeorder/cli/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "treeorder/error.hpp"

namespace treeorder::cli {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(std::size_t line_no)
{
    return "line " + std::to_string(line_no) + ": ";
}

double parse_double(std::string_view text, std::size_t line_no)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw IoError(where(line_no) + "invalid number '" + std::string(text) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view text, std::size_t line_no)
{
    text = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw IoError(where(line_no) + "invalid integer '" + std::string(text) + "'");
    }
    return value;
}

std::string strip_bom(std::string line)
{
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    return line;
}

}  // namespace

std::string format_exact(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_short(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Dataset read_dataset_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw IoError("dataset is empty");
    ++line_no;
    line = strip_bom(line);
    const auto header = split(line, ',');
    if (header.size() != 2 || trim(header[0]) != "population_id" || trim(header[1]) != "value") {
        throw IoError("dataset header must be 'population_id,value'");
    }

    std::map<std::size_t, std::vector<double>> groups;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2) throw IoError(where(line_no) + "expected 2 fields");
        const auto id = parse_count(fields[0], line_no);
        groups[id].push_back(parse_double(fields[1], line_no));
    }
    if (groups.empty() || groups.begin()->first != 0) {
        throw ValidationError("dataset has no control population (population_id 0)");
    }

    const std::size_t populations = groups.rbegin()->first + 1;
    std::vector<std::vector<double>> data(populations);
    for (auto& [id, values] : groups) data[id] = std::move(values);
    for (std::size_t i = 1; i < populations; ++i) {
        require(!data[i].empty(), "population " + std::to_string(i) + " has no observations");
    }
    return Dataset(std::move(data));
}

void write_records_header(std::ostream& out)
{
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        out << (i ? "," : "") << kRecordColumns[i];
    }
    out << '\n';
}

void write_record(std::ostream& out, const ReplicationRecord& r)
{
    out << r.s << ',' << r.replication << ',' << r.total_size << ',' << r.control_size << ','
        << r.treatment_size << ',' << format_exact(r.sigma2_hat) << ',' << format_exact(r.xi) << ','
        << format_exact(r.mu0_hat) << ',' << format_exact(r.control_gap) << ',' << format_exact(r.mu0_error)
        << ',' << format_exact(r.terms.within_control) << ',' << format_exact(r.terms.control_adjustment) << ','
        << format_exact(r.terms.within_treatments) << ',' << format_exact(r.terms.treatment_adjustment) << '\n';
}

RecordsFile read_records_csv(std::istream& in)
{
    RecordsFile file;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.front() == '#') {
            file.comments.push_back(line);
            continue;
        }
        have_header = true;
        break;
    }
    if (!have_header) throw IoError("records file has no header");
    const auto header = split(line, ',');
    bool header_ok = header.size() == kRecordColumns.size();
    for (std::size_t i = 0; header_ok && i < header.size(); ++i) header_ok = trim(header[i]) == kRecordColumns[i];
    if (!header_ok) throw IoError("records header does not match the expected schema");

    while (std::getline(in, line)) {
        ++line_no;
        // A row cut short by truncation has no terminating newline.
        if (in.eof()) throw IoError(where(line_no) + "truncated row (missing newline)");
        const auto f = split(line, ',');
        if (f.size() != kRecordColumns.size()) {
            throw IoError(where(line_no) + "expected " + std::to_string(kRecordColumns.size()) + " fields, got " +
                          std::to_string(f.size()));
        }
        ReplicationRecord r;
        r.s = parse_count(f[0], line_no);
        r.replication = parse_count(f[1], line_no);
        r.total_size = parse_count(f[2], line_no);
        r.control_size = parse_count(f[3], line_no);
        r.treatment_size = parse_count(f[4], line_no);
        r.sigma2_hat = parse_double(f[5], line_no);
        r.xi = parse_double(f[6], line_no);
        r.mu0_hat = parse_double(f[7], line_no);
        r.control_gap = parse_double(f[8], line_no);
        r.mu0_error = parse_double(f[9], line_no);
        r.terms.within_control = parse_double(f[10], line_no);
        r.terms.control_adjustment = parse_double(f[11], line_no);
        r.terms.within_treatments = parse_double(f[12], line_no);
        r.terms.treatment_adjustment = parse_double(f[13], line_no);
        file.records.push_back(r);
    }
    return file;
}

}  // namespace treeorder::cli
