// SPDX-License-Identifier: Apache-2.0
//
// holobeam: Lorentzian-constrained holographic beamforming for DMA-aided MISO downlink
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "holobeam/types.hpp"

namespace holobeam {

/// One inequality  sum_j Tr(G_j X_j) >= rhs.  An empty matrix stands for a
/// zero coefficient block.
struct TraceConstraint {
    std::vector<CMatrix> coeffs;
    double rhs = 0.0;
};

/// minimize sum_j Tr(F_j X_j)
/// s.t.     sum_j Tr(G_{k,j} X_j) >= b_k  for all k,   X_j Hermitian PSD.
struct TraceSdp {
    std::vector<CMatrix> objective;  // F_j, defines the block dimensions
    std::vector<TraceConstraint> constraints;

    int n_blocks() const { return static_cast<int>(objective.size()); }
    int block_dim(int j) const { return static_cast<int>(objective[static_cast<std::size_t>(j)].rows()); }

    /// Shape and Hermitian checks; throws std::invalid_argument.
    void validate(double herm_tol = 1e-10) const;
};

enum class SdpStatus { optimal, infeasible, max_iters };

std::string to_string(SdpStatus s);

struct SdpSolution {
    std::vector<CMatrix> blocks;  // X_j
    double objective = 0.0;
    SdpStatus status = SdpStatus::max_iters;
    double primal_residual = 0.0;  // relative, of the internally scaled problem
    double dual_residual = 0.0;
    double gap = 0.0;
    std::vector<double> eigen_ratio;  // lambda_2 / lambda_1 per block
    RVector dual;                     // multipliers y_k >= 0 of the original constraints
    int iterations = 0;
};

/// Infeasible-start primal-dual interior-point method (HKM direction with
/// Mehrotra predictor-corrector) working natively on complex Hermitian blocks.
/// The inequality slacks are carried as an extra nonnegative orthant block.
///
/// Single-threaded and reentrant.
SdpSolution solve_sdp(const TraceSdp& problem, double tol = 1e-7, int max_iters = 100);

/// sqrt(lambda_max) * u_max, phase-normalised so that the first entry that is
/// not negligibly small is real and positive.  A zero matrix gives a zero
/// vector.
CVector dominant_rank_one(const CMatrix& x);

/// lambda_2 / lambda_1 of a Hermitian PSD matrix (0 for rank <= 1 or n == 1).
double eigen_ratio(const CMatrix& x);

/// Plain-text dump for cross-checking against external solvers:
///   trace-sdp v1 / blocks J / dims n_1..n_J / objective blocks / constraints,
/// each matrix row-major as "re im" pairs.
void write_trace_sdp(std::ostream& out, const TraceSdp& problem);
TraceSdp read_trace_sdp(std::istream& in);

}  // namespace holobeam
