#include "sapcert/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sapcert {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Matrix read_matrix(std::istream& is) {
    int m = 0, n = 0;
    if (!(is >> m >> n) || m < 1 || n < 1) throw std::invalid_argument("matrix file: malformed header");
    Vector entries(static_cast<std::size_t>(m) * n);
    for (double& v : entries)
        if (!(is >> v)) throw std::invalid_argument("matrix file: truncated entries");
    return Matrix(m, n, std::move(entries));
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    return read_matrix(in);
}

void write_matrix(std::ostream& os, const Matrix& a) {
    os << a.rows() << ' ' << a.cols() << '\n';
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) os << (j ? " " : "") << format_double(a(i, j));
        os << '\n';
    }
}

void save_matrix(const Matrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    write_matrix(out, a);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Signal read_signal(std::istream& is) {
    Signal x;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream row(line);
        double v = 0.0;
        while (row >> v) x.push_back(v);
        if (!x.empty()) break;
    }
    if (x.empty()) throw std::invalid_argument("signal file: no entries");
    return x;
}

Signal load_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open signal file: " + path);
    return read_signal(in);
}

void write_signal(std::ostream& os, const Signal& x) {
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << format_double(x[i]);
    os << '\n';
}

void save_signal(const Signal& x, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write signal file: " + path);
    write_signal(out, x);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace sapcert
