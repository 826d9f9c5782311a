#pragma once

#include <iosfwd>
#include <string>

#include "sapcert/matrix.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

/// Matrix text format: line 1 "m n", then m whitespace-separated rows.
Matrix read_matrix(std::istream& is);
Matrix load_matrix(const std::string& path);
void write_matrix(std::ostream& os, const Matrix& a);
void save_matrix(const Matrix& a, const std::string& path);

/// Signals serialize as one whitespace-separated line of decimals.
Signal read_signal(std::istream& is);
Signal load_signal(const std::string& path);
void write_signal(std::ostream& os, const Signal& x);
void save_signal(const Signal& x, const std::string& path);

/// Shortest-round-trip decimal formatting used by every writer.
std::string format_double(double v);

} // namespace sapcert
