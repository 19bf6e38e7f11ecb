#include "zenoqst/triplets.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zenoqst {

namespace {

std::string format_entry(Eigen::Index row, Eigen::Index col, cplx v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g", static_cast<long>(row), static_cast<long>(col), v.real(), v.imag());
    return buf;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
    throw std::runtime_error("triplet file line " + std::to_string(line) + ": " + why);
}

}  // namespace

void write_triplets(std::ostream& os, const SparseMatrix& m) {
    os << "# zenoqst sparse-triplet v1\n# dim " << m.rows() << "\nrow,col,re,im\n";
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) os << format_entry(it.row(), it.col(), it.value()) << '\n';
}

void write_triplets(std::ostream& os, const Operator& op) { write_triplets(os, op.matrix()); }

void write_triplets(std::ostream& os, const DenseMatrix& m, double prune) {
    os << "# zenoqst sparse-triplet v1\n# dim " << m.rows() << "\nrow,col,re,im\n";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > prune) os << format_entry(i, j, m(i, j)) << '\n';
}

SparseMatrix read_triplets(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    long dim = -1;
    bool header_seen = false;
    std::vector<Eigen::Triplet<cplx>> entries;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# dim ", 0) == 0) {
                try {
                    dim = std::stol(line.substr(6));
                } catch (const std::exception&) {
                    parse_fail(lineno, "bad dimension");
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "row,col,re,im") parse_fail(lineno, "expected column header 'row,col,re,im'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        long r = 0, c = 0;
        double re = 0, im = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(ss >> r >> c1 >> c >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',')
            parse_fail(lineno, "malformed entry '" + line + "'");
        if (dim < 0) parse_fail(lineno, "entry before '# dim' line");
        if (r < 0 || c < 0 || r >= dim || c >= dim) parse_fail(lineno, "index out of range");
        entries.emplace_back(r, c, cplx(re, im));
    }
    if (dim < 0) parse_fail(lineno, "missing '# dim' line");
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

void write_basis(std::ostream& os, const Basis& basis) {
    os << "# zenoqst basis v1\n# dim " << basis.dim() << "\nindex,label\n";
    for (std::size_t i = 0; i < basis.dim(); ++i) os << i << ',' << basis.state(i).label() << '\n';
}

std::vector<BasisState> read_basis_labels(std::istream& is) {
    std::vector<BasisState> states;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line == "index,label") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) parse_fail(lineno, "expected '<index>,<label>'");
        if (std::stoul(line.substr(0, comma)) != states.size()) parse_fail(lineno, "indices must be consecutive");
        states.push_back(BasisState::parse(line.substr(comma + 1)));
    }
    return states;
}

}  // namespace zenoqst
