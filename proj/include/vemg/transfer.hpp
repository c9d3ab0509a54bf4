#pragma once

#include <string_view>
#include <vector>

#include "vemg/agglomeration.hpp"
#include "vemg/sparse.hpp"

namespace vemg {

enum class CoarseMode { inherited, non_inherited };

std::string_view to_string(CoarseMode mode);
CoarseMode parse_coarse_mode(std::string_view text);

enum class ProlongationRows {
  interior,     // rows and columns are interior dofs (what the solver uses)
  all_vertices  // rows and columns are mesh vertices, boundary included
};

// Prolongation from level j-1 to level j (2 <= j <= J). A fine node that is
// also a coarse node copies the coarse value; a fine node strictly inside an
// agglomerate takes the value of the agglomerate's Pi^nabla polynomial of the
// coarse function.
SparseMatrix prolongation_matrix(const MeshHierarchy& h, int j,
                                 ProlongationRows rows = ProlongationRows::interior);

// Operator ladder, 1-based level index like MeshHierarchy.
class TransferSet {
 public:
  TransferSet(std::vector<SparseMatrix> operators,
              std::vector<SparseMatrix> prolongations, CoarseMode mode);

  int num_levels() const { return static_cast<int>(operators_.size()); }
  const SparseMatrix& op(int j) const { return operators_.at(j - 1); }
  // Defined for j >= 2.
  const SparseMatrix& prolongation(int j) const {
    return prolongations_.at(j - 1);
  }
  CoarseMode mode() const { return mode_; }

  const std::vector<SparseMatrix>& operators() const { return operators_; }
  const std::vector<SparseMatrix>& prolongations() const { return prolongations_; }

 private:
  std::vector<SparseMatrix> operators_;
  std::vector<SparseMatrix> prolongations_;  // [0] is empty
  CoarseMode mode_;
};

// inherited: A_{j-1} = P_j^T A_j P_j; non_inherited: fresh assembly on each
// coarse mesh with the same mu.
TransferSet coarse_operators(const SparseMatrix& a_fine, const MeshHierarchy& h,
                             double mu, CoarseMode mode);

}  // namespace vemg
