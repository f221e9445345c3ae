#include "poislrt/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "poislrt/errors.hpp"

namespace poislrt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_count(std::string_view field, int& value) {
    field = trim(field);
    if (field.empty()) return false;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

CountMatrix read_count_matrix(std::istream& in) {
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<int> values;
    int m = -1;
    int line_no = 0;
    int data_rows = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        split_fields(sv, fields);
        if (first_content_line) {
            first_content_line = false;
            // Header auto-detection: skip the line when any field is non-numeric.
            bool numeric = true;
            int tmp;
            for (auto f : fields)
                if (!parse_count(f, tmp)) numeric = false;
            if (!numeric) continue;
        }
        if (m < 0) {
            m = static_cast<int>(fields.size());
            if (m < 2) throw CsvError("need at least two columns", line_no);
        } else if (static_cast<int>(fields.size()) != m) {
            std::ostringstream msg;
            msg << "expected " << m << " fields, found " << fields.size();
            throw CsvError(msg.str(), line_no);
        }
        for (auto f : fields) {
            int v;
            if (!parse_count(f, v))
                throw CsvError("field is not a nonnegative integer: '" + std::string(trim(f)) + "'",
                               line_no);
            if (v < 0) throw CsvError("negative count", line_no);
            values.push_back(v);
        }
        ++data_rows;
    }
    if (data_rows == 0) throw CsvError("no data rows", line_no);
    CountMatrix out(data_rows, m);
    for (int i = 0; i < data_rows; ++i)
        for (int j = 0; j < m; ++j) out.at(i, j) = values[static_cast<std::size_t>(i) * m + j];
    return out;
}

CountMatrix read_count_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open input file: " + path, 0);
    return read_count_matrix(in);
}

void write_count_matrix(const CountMatrix& data, std::ostream& out) {
    for (int j = 0; j < data.m(); ++j) out << (j ? ",y" : "y") << (j + 1);
    out << '\n';
    for (int i = 0; i < data.n(); ++i) {
        auto row = data.row(i);
        for (int j = 0; j < data.m(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
}

void write_count_matrix_file(const CountMatrix& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open output file: " + path, 0);
    write_count_matrix(data, out);
    out.flush();
    if (!out) throw CsvError("write failed: " + path, 0);
}

}  // namespace poislrt
