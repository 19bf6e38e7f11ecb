#pragma once

// Plain-text sparse-triplet format.
//
//   # zenoqst sparse-triplet v1
//   # dim <n>
//   row,col,re,im
//   <row>,<col>,<re>,<im>     one line per stored entry, column-major order
//
// Values are written with 17 significant digits so that reading a file back
// reproduces the matrix bit-for-bit. Additional '#' lines are ignored on read.
//
// Basis listings use
//
//   # zenoqst basis v1
//   # dim <n>
//   index,label
//   <i>,<BasisState::label()>

#include "zenoqst/operator.hpp"

#include <iosfwd>

namespace zenoqst {

void write_triplets(std::ostream& os, const SparseMatrix& m);
void write_triplets(std::ostream& os, const Operator& op);
void write_triplets(std::ostream& os, const DenseMatrix& m, double prune = 0.0);
// Throws std::runtime_error with the offending line number on malformed input.
SparseMatrix read_triplets(std::istream& is);

void write_basis(std::ostream& os, const Basis& basis);
// Reads labels back; the caller supplies the SystemSpec to rebuild index maps.
std::vector<BasisState> read_basis_labels(std::istream& is);

}  // namespace zenoqst
