#ifndef MMID_IO_HPP
#define MMID_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "mmid/matrix.hpp"

namespace mmid {

// CSV layout: one matrix row per line, comma separated, '.' decimal, no
// header. Doubles are written in shortest round-trip form so files reload
// bit-exactly.
std::string format_double(double v);

void write_csv(const DataMatrix &m, const std::filesystem::path &path);
DataMatrix read_csv(const std::filesystem::path &path);

void write_value_csv(const std::vector<double> &values, const std::filesystem::path &path);

// Sidecar descriptor accompanying CLI-emitted matrices.
void write_matrix_descriptor(const DataMatrix &m, const std::string &label,
                             const std::filesystem::path &csv_path);

void write_text_file(const std::string &text, const std::filesystem::path &path);
std::string read_text_file(const std::filesystem::path &path);

}  // namespace mmid

#endif
