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

#include "holobeam/sdp.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace holobeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Re Tr(A B)
double re_trace_prod(const CMatrix& a, const CMatrix& b) {
    return a.transpose().cwiseProduct(b).sum().real();
}

CMatrix herm(const CMatrix& y) { return 0.5 * (y + y.adjoint()); }

// Largest alpha with X + alpha dX PSD, for X positive definite.
double max_step_psd(const CMatrix& x, const CMatrix& dx) {
    Eigen::LLT<CMatrix> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    const CMatrix t1 = llt.matrixL().solve(dx);
    const CMatrix t2 = llt.matrixL().solve(CMatrix(t1.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(t2), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : kInf;
}

double max_step_orthant(const RVector& v, const RVector& dv) {
    double a = kInf;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
    }
    return a;
}

bool is_zero_block(const CMatrix& m) { return m.size() == 0 || m.isZero(0.0); }

// Internally normalised copy of the problem: each constraint row has unit
// Frobenius norm, the right-hand side has unit max-norm and the objective
// has unit max-abs entry.
struct ScaledProblem {
    std::vector<CMatrix> c;
    std::vector<std::vector<CMatrix>> a;  // [k][j], empty = zero
    RVector b;
    std::vector<int> original_index;
    std::vector<double> row_norm;
    double scale_b = 1.0;
    double scale_c = 1.0;
};

struct Direction {
    std::vector<CMatrix> dx, dz;
    RVector ds, dzl, dy;
};

}  // namespace

void TraceSdp::validate(double herm_tol) const {
    if (objective.empty()) throw std::invalid_argument("TraceSdp: no blocks");
    for (const auto& f : objective) {
        if (f.rows() != f.cols() || f.rows() == 0) throw std::invalid_argument("TraceSdp: objective block not square");
        if ((f - f.adjoint()).cwiseAbs().maxCoeff() > herm_tol * (1.0 + f.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("TraceSdp: objective block not Hermitian");
    }
    for (const auto& con : constraints) {
        if (con.coeffs.size() != objective.size())
            throw std::invalid_argument("TraceSdp: constraint block count mismatch");
        for (std::size_t j = 0; j < objective.size(); ++j) {
            const auto& g = con.coeffs[j];
            if (g.size() == 0) continue;
            if (g.rows() != objective[j].rows() || g.cols() != objective[j].cols())
                throw std::invalid_argument("TraceSdp: constraint block dimension mismatch");
            if ((g - g.adjoint()).cwiseAbs().maxCoeff() > herm_tol * (1.0 + g.cwiseAbs().maxCoeff()))
                throw std::invalid_argument("TraceSdp: constraint block not Hermitian");
        }
    }
}

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::infeasible: return "infeasible";
        case SdpStatus::max_iters: return "max_iters";
    }
    return "unknown";
}

double eigen_ratio(const CMatrix& x) {
    if (x.rows() < 2) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(x), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending
    const double l1 = ev[ev.size() - 1];
    if (!(l1 > 0.0)) return 0.0;
    return std::max(ev[ev.size() - 2], 0.0) / l1;
}

CVector dominant_rank_one(const CMatrix& x) {
    const Eigen::Index n = x.rows();
    if (n == 0 || x.isZero(0.0)) return CVector::Zero(n);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(x));
    const double lmax = es.eigenvalues()[n - 1];
    if (!(lmax > 0.0)) return CVector::Zero(n);
    CVector v = std::sqrt(lmax) * es.eigenvectors().col(n - 1);
    const double cutoff = 1e-9 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v[i]) > cutoff) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            v[i] = std::abs(v[i]);
            break;
        }
    }
    return v;
}

SdpSolution solve_sdp(const TraceSdp& problem, double tol, int max_iters) {
    problem.validate();
    if (problem.constraints.empty()) throw std::invalid_argument("solve_sdp: at least one constraint is required");
    const int nb = problem.n_blocks();
    const int k_all = static_cast<int>(problem.constraints.size());

    SdpSolution sol;
    sol.dual = RVector::Zero(k_all);
    for (int j = 0; j < nb; ++j) sol.blocks.push_back(CMatrix::Zero(problem.block_dim(j), problem.block_dim(j)));
    sol.eigen_ratio.assign(static_cast<std::size_t>(nb), 0.0);

    ScaledProblem sp;
    for (int k = 0; k < k_all; ++k) {
        const auto& con = problem.constraints[static_cast<std::size_t>(k)];
        double nrm2 = 0.0;
        for (const auto& g : con.coeffs) {
            if (g.size() != 0) nrm2 += g.squaredNorm();
        }
        if (nrm2 == 0.0) {
            if (con.rhs > 0.0) {
                // 0 >= b with b > 0: empty feasible set.
                sol.status = SdpStatus::infeasible;
                return sol;
            }
            continue;
        }
        const double nrm = std::sqrt(nrm2);
        std::vector<CMatrix> row;
        for (const auto& g : con.coeffs) row.push_back(is_zero_block(g) ? CMatrix() : CMatrix(g / nrm));
        sp.a.push_back(std::move(row));
        sp.row_norm.push_back(nrm);
        sp.original_index.push_back(k);
    }
    const int kc = static_cast<int>(sp.a.size());
    if (kc == 0) {
        // Every constraint is trivially satisfied; X = 0 is optimal for PSD objectives.
        bool psd = true;
        for (const auto& f : problem.objective) {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(f), Eigen::EigenvaluesOnly);
            psd = psd && es.eigenvalues().minCoeff() >= 0.0;
        }
        sol.status = psd ? SdpStatus::optimal : SdpStatus::max_iters;
        return sol;
    }
    sp.b.resize(kc);
    for (int k = 0; k < kc; ++k)
        sp.b[k] = problem.constraints[static_cast<std::size_t>(sp.original_index[k])].rhs / sp.row_norm[k];
    sp.scale_b = sp.b.cwiseAbs().maxCoeff();
    if (!(sp.scale_b > 0.0)) sp.scale_b = 1.0;
    sp.b /= sp.scale_b;
    sp.scale_c = 0.0;
    for (const auto& f : problem.objective) sp.scale_c = std::max(sp.scale_c, f.cwiseAbs().maxCoeff());
    if (!(sp.scale_c > 0.0)) sp.scale_c = 1.0;
    for (const auto& f : problem.objective) sp.c.push_back(f / sp.scale_c);

    // Initial point.
    double norm_c = 0.0;
    for (const auto& c : sp.c) norm_c += c.squaredNorm();
    norm_c = std::sqrt(norm_c);
    std::vector<CMatrix> x(static_cast<std::size_t>(nb)), z(static_cast<std::size_t>(nb));
    double nu = kc;
    for (int j = 0; j < nb; ++j) {
        const int n = problem.block_dim(j);
        double amax = 0.0;
        double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
        for (int k = 0; k < kc; ++k) {
            const auto& a = sp.a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            if (a.size() == 0) continue;
            const double an = a.norm();
            amax = std::max(amax, an);
            xi = std::max(xi, n * (1.0 + std::abs(sp.b[k])) / (1.0 + an));
        }
        const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), sp.c[static_cast<std::size_t>(j)].norm(), amax});
        x[static_cast<std::size_t>(j)] = xi * CMatrix::Identity(n, n);
        z[static_cast<std::size_t>(j)] = eta * CMatrix::Identity(n, n);
        nu += n;
    }
    RVector s = RVector::Constant(kc, 10.0);
    RVector zl = RVector::Constant(kc, 10.0);
    RVector y = RVector::Zero(kc);

    auto apply_a = [&](const std::vector<CMatrix>& blocks, const RVector& lp) {
        RVector out(kc);
        for (int k = 0; k < kc; ++k) {
            double acc = -lp[k];
            for (int j = 0; j < nb; ++j) {
                const auto& a = sp.a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                if (a.size() != 0) acc += re_trace_prod(a, blocks[static_cast<std::size_t>(j)]);
            }
            out[k] = acc;
        }
        return out;
    };

    SdpStatus status = SdpStatus::max_iters;
    double pinf = kInf, dinf = kInf, relgap = kInf;
    int iter = 0;
    for (; iter <= max_iters; ++iter) {
        // Residuals.
        const RVector rp = sp.b - apply_a(x, s);
        std::vector<CMatrix> rd(static_cast<std::size_t>(nb));
        double rd2 = 0.0, pobj = 0.0, comp = 0.0;
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            CMatrix r = sp.c[ju] - z[ju];
            for (int k = 0; k < kc; ++k) {
                const auto& a = sp.a[static_cast<std::size_t>(k)][ju];
                if (a.size() != 0) r -= y[k] * a;
            }
            rd2 += r.squaredNorm();
            rd[ju] = std::move(r);
            pobj += re_trace_prod(sp.c[ju], x[ju]);
            comp += re_trace_prod(x[ju], z[ju]);
        }
        const RVector rdl = y - zl;
        rd2 += rdl.squaredNorm();
        comp += s.dot(zl);
        const double dobj = sp.b.dot(y);
        pinf = rp.norm() / (1.0 + sp.b.norm());
        dinf = std::sqrt(rd2) / (1.0 + norm_c);
        const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
        relgap = std::max(std::abs(pobj - dobj), std::abs(comp)) / denom;
        if (pinf <= tol && dinf <= tol && relgap <= tol) {
            status = SdpStatus::optimal;
            break;
        }
        if (dobj > 0.0) {
            // A^T y + Z = C - Rd stays bounded while b^T y diverges: primal infeasible.
            double aty2 = 0.0;
            for (int j = 0; j < nb; ++j) aty2 += (sp.c[static_cast<std::size_t>(j)] - rd[static_cast<std::size_t>(j)]).squaredNorm();
            if (dobj > 1e8 && std::sqrt(aty2) / dobj < 1e-8) {
                status = SdpStatus::infeasible;
                break;
            }
        }
        if (iter == max_iters) break;
        const double mu = comp / nu;

        // Schur complement M_kl = Re Tr(A_k X A_l Z^{-1}) + delta_kl s_k / z_k.
        std::vector<CMatrix> zinv(static_cast<std::size_t>(nb));
        bool chol_ok = true;
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            Eigen::LLT<CMatrix> llt(z[ju]);
            if (llt.info() != Eigen::Success) {
                chol_ok = false;
                break;
            }
            zinv[ju] = herm(llt.solve(CMatrix::Identity(z[ju].rows(), z[ju].cols())));
        }
        if (!chol_ok) break;
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(kc, kc);
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            for (int l = 0; l < kc; ++l) {
                const auto& al = sp.a[static_cast<std::size_t>(l)][ju];
                if (al.size() == 0) continue;
                const CMatrix g = x[ju] * al * zinv[ju];
                for (int k = 0; k < kc; ++k) {
                    const auto& ak = sp.a[static_cast<std::size_t>(k)][ju];
                    if (ak.size() != 0) schur(k, l) += re_trace_prod(ak, g);
                }
            }
        }
        for (int k = 0; k < kc; ++k) schur(k, k) += s[k] / zl[k];
        schur = 0.5 * (schur + schur.transpose()).eval();
        Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
        if (schur_llt.info() != Eigen::Success) {
            schur.diagonal().array() += 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
            schur_llt.compute(schur);
            if (schur_llt.info() != Eigen::Success) break;
        }

        std::vector<CMatrix> xrz(static_cast<std::size_t>(nb));
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            xrz[ju] = x[ju] * rd[ju] * zinv[ju];
        }

        auto direction = [&](double sigmu, const std::vector<CMatrix>* corr, const RVector* corr_lp) {
            Direction d;
            std::vector<CMatrix> t(static_cast<std::size_t>(nb));
            for (int j = 0; j < nb; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                t[ju] = xrz[ju] - sigmu * zinv[ju];
                if (corr) t[ju] += (*corr)[ju];
            }
            RVector t_lp = s.cwiseProduct(rdl).cwiseQuotient(zl) - sigmu * zl.cwiseInverse();
            if (corr_lp) t_lp += *corr_lp;
            const RVector h = sp.b + apply_a(t, t_lp);
            d.dy = schur_llt.solve(h);
            d.dz.resize(static_cast<std::size_t>(nb));
            d.dx.resize(static_cast<std::size_t>(nb));
            for (int j = 0; j < nb; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                CMatrix dzj = rd[ju];
                for (int k = 0; k < kc; ++k) {
                    const auto& a = sp.a[static_cast<std::size_t>(k)][ju];
                    if (a.size() != 0) dzj -= d.dy[k] * a;
                }
                CMatrix dxj = sigmu * zinv[ju] - x[ju] - x[ju] * dzj * zinv[ju];
                if (corr) dxj -= (*corr)[ju];
                d.dx[ju] = herm(dxj);
                d.dz[ju] = herm(dzj);
            }
            d.dzl = rdl + d.dy;
            d.ds = sigmu * zl.cwiseInverse() - s - s.cwiseProduct(d.dzl).cwiseQuotient(zl);
            if (corr_lp) d.ds -= *corr_lp;
            return d;
        };
        auto step_lengths = [&](const Direction& d) {
            double ap = max_step_orthant(s, d.ds);
            double ad = max_step_orthant(zl, d.dzl);
            for (int j = 0; j < nb; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                ap = std::min(ap, max_step_psd(x[ju], d.dx[ju]));
                ad = std::min(ad, max_step_psd(z[ju], d.dz[ju]));
            }
            return std::pair{ap, ad};
        };

        // Predictor.
        const Direction pred = direction(0.0, nullptr, nullptr);
        auto [ap, ad] = step_lengths(pred);
        ap = std::min(1.0, ap);
        ad = std::min(1.0, ad);
        double comp_aff = (s + ap * pred.ds).dot(zl + ad * pred.dzl);
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            comp_aff += re_trace_prod(x[ju] + ap * pred.dx[ju], z[ju] + ad * pred.dz[ju]);
        }
        const double ratio = std::clamp(comp_aff / comp, 0.0, 1.0);
        const double sigma = ratio * ratio * ratio;

        // Corrector.
        std::vector<CMatrix> corr(static_cast<std::size_t>(nb));
        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            corr[ju] = pred.dx[ju] * pred.dz[ju] * zinv[ju];
        }
        const RVector corr_lp = pred.ds.cwiseProduct(pred.dzl).cwiseQuotient(zl);
        const Direction d = direction(sigma * mu, &corr, &corr_lp);
        auto [apm, adm] = step_lengths(d);
        const double gamma = 0.9 + 0.09 * std::min({ap, ad, 1.0});
        const double alpha_p = std::min(1.0, gamma * apm);
        const double alpha_d = std::min(1.0, gamma * adm);
        if (std::max(alpha_p, alpha_d) < 1e-12) break;

        for (int j = 0; j < nb; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            x[ju] = herm(x[ju] + alpha_p * d.dx[ju]);
            z[ju] = herm(z[ju] + alpha_d * d.dz[ju]);
        }
        s += alpha_p * d.ds;
        zl += alpha_d * d.dzl;
        y += alpha_d * d.dy;
    }

    sol.status = status;
    sol.iterations = iter;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.gap = relgap;
    if (status == SdpStatus::infeasible) return sol;

    sol.objective = 0.0;
    for (int j = 0; j < nb; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        sol.blocks[ju] = herm(sp.scale_b * x[ju]);
        sol.objective += re_trace_prod(problem.objective[ju], sol.blocks[ju]);
        sol.eigen_ratio[ju] = eigen_ratio(sol.blocks[ju]);
    }
    for (int k = 0; k < kc; ++k)
        sol.dual[sp.original_index[static_cast<std::size_t>(k)]] = sp.scale_c * y[k] / sp.row_norm[static_cast<std::size_t>(k)];
    return sol;
}

namespace {

void write_matrix(std::ostream& out, const CMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << m(r, c).real() << ' ' << m(r, c).imag();
        }
        out << '\n';
    }
}

CMatrix read_matrix(std::istream& in, int n) {
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) throw std::runtime_error("trace-sdp: truncated matrix");
            m(r, c) = {re, im};
        }
    }
    return m;
}

void expect(std::istream& in, const std::string& word) {
    std::string tok;
    if (!(in >> tok) || tok != word) throw std::runtime_error("trace-sdp: expected '" + word + "', got '" + tok + "'");
}

}  // namespace

void write_trace_sdp(std::ostream& out, const TraceSdp& problem) {
    const auto old_prec = out.precision(17);
    out << "trace-sdp v1\n";
    out << "blocks " << problem.n_blocks() << "\n";
    out << "dims";
    for (int j = 0; j < problem.n_blocks(); ++j) out << ' ' << problem.block_dim(j);
    out << "\n";
    for (int j = 0; j < problem.n_blocks(); ++j) {
        out << "objective " << j << "\n";
        write_matrix(out, problem.objective[static_cast<std::size_t>(j)]);
    }
    out << "constraints " << problem.constraints.size() << "\n";
    for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
        const auto& con = problem.constraints[k];
        out << "constraint " << k << " rhs " << con.rhs << "\n";
        for (int j = 0; j < problem.n_blocks(); ++j) {
            const auto& g = con.coeffs[static_cast<std::size_t>(j)];
            if (is_zero_block(g)) {
                out << "block " << j << " zero\n";
            } else {
                out << "block " << j << " dense\n";
                write_matrix(out, g);
            }
        }
    }
    out.precision(old_prec);
}

TraceSdp read_trace_sdp(std::istream& in) {
    expect(in, "trace-sdp");
    expect(in, "v1");
    expect(in, "blocks");
    int nb = 0;
    in >> nb;
    expect(in, "dims");
    std::vector<int> dims(static_cast<std::size_t>(nb));
    for (auto& d : dims) in >> d;
    TraceSdp p;
    for (int j = 0; j < nb; ++j) {
        expect(in, "objective");
        int idx = 0;
        in >> idx;
        p.objective.push_back(read_matrix(in, dims[static_cast<std::size_t>(j)]));
    }
    expect(in, "constraints");
    std::size_t nk = 0;
    in >> nk;
    for (std::size_t k = 0; k < nk; ++k) {
        TraceConstraint con;
        expect(in, "constraint");
        std::size_t idx = 0;
        in >> idx;
        expect(in, "rhs");
        in >> con.rhs;
        for (int j = 0; j < nb; ++j) {
            expect(in, "block");
            int bj = 0;
            std::string kind;
            in >> bj >> kind;
            if (kind == "zero") {
                con.coeffs.emplace_back();
            } else if (kind == "dense") {
                con.coeffs.push_back(read_matrix(in, dims[static_cast<std::size_t>(j)]));
            } else {
                throw std::runtime_error("trace-sdp: unknown block kind '" + kind + "'");
            }
        }
        p.constraints.push_back(std::move(con));
    }
    if (!in) throw std::runtime_error("trace-sdp: malformed input");
    return p;
}

}  // namespace holobeam
