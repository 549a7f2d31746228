#include "mmid/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace mmid {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string &text, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const DataMatrix &m, const std::filesystem::path &path) {
    std::string out;
    out.reserve(m.size() * 12);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double(m(i, j));
        }
        out.push_back('\n');
    }
    write_text_file(out, path);
}

DataMatrix read_csv(const std::filesystem::path &path) {
    const std::string text = read_text_file(path);
    std::vector<double> values;
    std::size_t rows = 0, cols = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        if (eol > pos) {
            std::size_t row_cols = 0;
            std::size_t p = pos;
            while (p < eol) {
                std::size_t comma = text.find(',', p);
                if (comma == std::string::npos || comma > eol) comma = eol;
                double v = 0.0;
                const auto res = std::from_chars(text.data() + p, text.data() + comma, v);
                if (res.ec != std::errc{})
                    throw IoError("bad numeric field in " + path.string());
                values.push_back(v);
                ++row_cols;
                p = comma + 1;
            }
            if (rows == 0) {
                cols = row_cols;
            } else if (row_cols != cols) {
                throw IoError("ragged CSV rows in " + path.string());
            }
            ++rows;
        }
        pos = eol + 1;
    }
    if (rows == 0 || cols == 0) throw IoError("empty CSV: " + path.string());
    return DataMatrix(rows, cols, std::move(values));
}

void write_value_csv(const std::vector<double> &values, const std::filesystem::path &path) {
    std::string out;
    for (double v : values) {
        out += format_double(v);
        out.push_back('\n');
    }
    write_text_file(out, path);
}

void write_matrix_descriptor(const DataMatrix &m, const std::string &label,
                             const std::filesystem::path &csv_path) {
    nlohmann::json j{{"rows", m.rows()}, {"cols", m.cols()}, {"label", label}};
    std::filesystem::path side = csv_path;
    side.replace_extension(".json");
    write_text_file(j.dump(2) + "\n", side);
}

}  // namespace mmid
