// SPDX-License-Identifier: Apache-2.0
//
// nfisac: near-field wideband ISAC beamforming simulation library
// Copyright (C) 2026 The nfisac authors
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

// Per-subcarrier digital combiners applied to a beamformed channel before
// the delay transform.
//
// For a combiner v and channel h the delay profile is
//   chi(k) = |sum_m conj(v_m) h_m exp(+j 2 pi m k / M)|^2 = v^H c(k) c(k)^H v,
// with c_m(k) = h_m exp(+j 2 pi m k / M). The energy spread
//   ES(v) = sum_k rho(k) chi(k) / sum_k chi(k) = (v^H A v) / (v^H B v)
// is a generalised Rayleigh quotient, so its minimiser is the generalised
// eigenvector of (A, B) with the smallest eigenvalue. B = M diag(|h_m|^2).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nfisac/core/geometry.hpp"

namespace nfisac {

enum class CombinerMethod { mrc, es, combined, flat, crb_min };

inline std::string_view to_string(CombinerMethod m)
{
    switch (m) {
    case CombinerMethod::mrc: return "mrc";
    case CombinerMethod::es: return "es";
    case CombinerMethod::combined: return "combined";
    case CombinerMethod::flat: return "flat";
    case CombinerMethod::crb_min: return "crb_min";
    }
    return "unknown";
}

inline CombinerMethod combiner_from_string(std::string_view s)
{
    for (auto m : {CombinerMethod::mrc, CombinerMethod::es, CombinerMethod::combined, CombinerMethod::flat,
                   CombinerMethod::crb_min})
        if (to_string(m) == s)
            return m;
    throw std::invalid_argument("unknown combiner method '" + std::string(s) + "'");
}

/// Unit-norm subcarrier weights v.
struct Combiner {
    CVector values;
    CombinerMethod method = CombinerMethod::flat;

    int size() const { return static_cast<int>(values.size()); }
};

/// rho(k) = d(k, k0)^2 outside a guard window of g bins, 0 inside.
struct EsWeighting {
    int center_bin = 0;
    int guard_bins = 1;

    void validate(int n_bins) const
    {
        if (guard_bins < 0 || 2 * guard_bins >= n_bins)
            throw std::invalid_argument("EsWeighting: guard window must satisfy 0 <= g < M/2");
    }

    double weight(int k, int n_bins) const
    {
        int d = ((k - center_bin) % n_bins + n_bins) % n_bins;
        d = std::min(d, n_bins - d);
        return d > guard_bins ? static_cast<double>(d) * d : 0.0;
    }
};

struct EsMatrices {
    CMatrix a_matrix;
    CMatrix b_matrix;
};

inline Combiner normalized(CVector v, CombinerMethod method)
{
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::domain_error("combiner: weights vanish");
    return {v / n, method};
}

inline Combiner flat_combiner(int n_subcarriers)
{
    return {CVector::Constant(n_subcarriers, cdouble(1.0 / std::sqrt(static_cast<double>(n_subcarriers)), 0.0)),
            CombinerMethod::flat};
}

/// v = h / ||h||
inline Combiner mrc_combiner(const SubcarrierChannel& h)
{
    if (!(h.norm() > 0.0))
        throw std::domain_error("mrc_combiner: channel is identically zero");
    return normalized(h, CombinerMethod::mrc);
}

/// S(v) = |v^H h|^2 / (sigma^2 ||v||^2)
inline double peak_snr(const CVector& v, const SubcarrierChannel& h, double sigma2)
{
    return std::norm(v.dot(h)) / (sigma2 * v.squaredNorm());
}

/// chi(k) for k = 0..M-1 (direct O(M^2) sum).
inline RVector delay_profile(const CVector& v, const SubcarrierChannel& h)
{
    if (v.size() != h.size())
        throw std::invalid_argument("delay_profile: length mismatch");
    const auto M = static_cast<int>(h.size());
    const CVector u = v.conjugate().cwiseProduct(h);
    RVector chi(M);
    for (int k = 0; k < M; ++k) {
        cdouble s = 0.0;
        for (int m = 0; m < M; ++m)
            s += u(m) * unit_phasor(kTwoPi * ((static_cast<long long>(m) * k) % M) / M);
        chi(k) = std::norm(s);
    }
    return chi;
}

inline RVector delay_profile(const Combiner& v, const SubcarrierChannel& h) { return delay_profile(v.values, h); }

inline double energy_spread(const CVector& v, const SubcarrierChannel& h, const EsWeighting& weighting)
{
    const auto M = static_cast<int>(h.size());
    weighting.validate(M);
    const RVector chi = delay_profile(v, h);
    const double total = chi.sum();
    if (!(total > 0.0))
        throw std::domain_error("energy_spread: combined channel carries no energy");
    double num = 0.0;
    for (int k = 0; k < M; ++k)
        num += weighting.weight(k, M) * chi(k);
    return num / total;
}

inline double energy_spread(const Combiner& v, const SubcarrierChannel& h, const EsWeighting& weighting)
{
    return energy_spread(v.values, h, weighting);
}

/// A = sum_k rho(k) c(k) c(k)^H, B = sum_k c(k) c(k)^H.
inline EsMatrices es_matrices(const SubcarrierChannel& h, const EsWeighting& weighting)
{
    const auto M = static_cast<int>(h.size());
    weighting.validate(M);
    // A(m, m') = h_m conj(h_m') R(m - m'), R(d) = sum_k rho(k) exp(+j 2 pi d k / M)
    CVector kernel(M);
    for (int d = 0; d < M; ++d) {
        cdouble s = 0.0;
        for (int k = 0; k < M; ++k)
            s += weighting.weight(k, M) * unit_phasor(kTwoPi * ((static_cast<long long>(d) * k) % M) / M);
        kernel(d) = s;
    }
    EsMatrices out{CMatrix(M, M), CMatrix::Zero(M, M)};
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp < M; ++mp)
            out.a_matrix(m, mp) = h(m) * std::conj(h(mp)) * kernel(((m - mp) % M + M) % M);
        out.b_matrix(m, m) = static_cast<double>(M) * std::norm(h(m));
    }
    // Exact Hermitian symmetry.
    out.a_matrix = 0.5 * (out.a_matrix + out.a_matrix.adjoint()).eval();
    return out;
}

namespace detail {

/// Subcarriers carrying non-negligible channel energy.
inline std::vector<int> channel_support(const SubcarrierChannel& h)
{
    const double peak = h.cwiseAbs2().maxCoeff();
    std::vector<int> idx;
    for (int m = 0; m < h.size(); ++m)
        if (std::norm(h(m)) > 1e-24 * peak)
            idx.push_back(m);
    return idx;
}

struct GeneralizedEigen {
    CVector vector;
    double value = 0.0;
};

/// Extreme generalised eigenpair of (Q, B) restricted to the support of h,
/// with zeros re-inserted elsewhere.
inline GeneralizedEigen extreme_generalized_eigen(const CMatrix& q, const CMatrix& b, const SubcarrierChannel& h,
                                                  bool largest)
{
    const auto support = channel_support(h);
    if (support.empty())
        throw std::domain_error("combiner: channel is identically zero");
    const auto k = static_cast<Eigen::Index>(support.size());
    CMatrix qs(k, k), bs(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            qs(i, j) = q(support[i], support[j]);
            bs(i, j) = b(support[i], support[j]);
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> solver(qs, bs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("combiner: generalised eigen-solve failed");
    const Eigen::Index pick = largest ? k - 1 : 0;
    GeneralizedEigen out;
    out.value = solver.eigenvalues()(pick);
    out.vector = CVector::Zero(h.size());
    for (Eigen::Index i = 0; i < k; ++i)
        out.vector(support[i]) = solver.eigenvectors()(i, pick);
    return out;
}

/// Removes the arbitrary eigenvector phase so that v^H h is real positive.
inline CVector align_phase(CVector v, const SubcarrierChannel& h)
{
    const cdouble s = v.dot(h);
    if (std::abs(s) > 0.0)
        v *= std::conj(s) / std::abs(s);
    return v;
}

} // namespace detail

/// Minimum energy-spread combiner.
inline Combiner es_combiner(const SubcarrierChannel& h, const EsWeighting& weighting)
{
    const EsMatrices mats = es_matrices(h, weighting);
    auto eig = detail::extreme_generalized_eigen(mats.a_matrix, mats.b_matrix, h, false);
    return normalized(detail::align_phase(eig.vector, h), CombinerMethod::es);
}

/// Maximiser of mu P(v) - (1 - mu) ES(v) where P(v) = |c(k0)^H v|^2 / v^H B v
/// is the fraction of profile energy in the design bin.
inline Combiner combined_combiner(const SubcarrierChannel& h, const EsWeighting& weighting, double mu)
{
    if (!(mu >= 0.0 && mu <= 1.0))
        throw std::invalid_argument("combined_combiner: mu must lie in [0, 1]");
    const EsMatrices mats = es_matrices(h, weighting);
    const auto M = static_cast<int>(h.size());
    CVector c(M);
    for (int m = 0; m < M; ++m) {
        const long long idx = ((static_cast<long long>(m) * weighting.center_bin) % M + M) % M;
        c(m) = h(m) * unit_phasor(kTwoPi * static_cast<double>(idx) / M);
    }
    CMatrix q = mu * (c * c.adjoint()) - (1.0 - mu) * mats.a_matrix;
    q = 0.5 * (q + q.adjoint()).eval();
    auto eig = detail::extreme_generalized_eigen(q, mats.b_matrix, h, true);
    return normalized(detail::align_phase(eig.vector, h), CombinerMethod::combined);
}

/// Peak fraction P(v) = chi(k0) / sum_k chi(k), the first term of the
/// combined objective.
inline double peak_fraction(const CVector& v, const SubcarrierChannel& h, int center_bin)
{
    const RVector chi = delay_profile(v, h);
    const auto M = static_cast<int>(h.size());
    return chi(((center_bin % M) + M) % M) / chi.sum();
}

/// CRB on round-trip delay: 1 / (8 pi^2 S(v) S_f), where S_f is the spectral
/// spread of the combined energy |conj(v_m) h_m|^2 over the subcarrier grid.
/// Returns +inf when S_f vanishes.
inline double delay_crb(const CVector& v, const SubcarrierChannel& h, double sigma2, const FrequencyGrid& grid)
{
    if (v.size() != h.size() || h.size() != grid.size())
        throw std::invalid_argument("delay_crb: length mismatch");
    const RVector q = v.cwiseAbs2().cwiseProduct(h.cwiseAbs2());
    const double e = q.sum();
    if (!(e > 0.0))
        throw std::domain_error("delay_crb: combined channel carries no energy");
    double mean = 0.0, second = 0.0;
    for (int m = 0; m < grid.size(); ++m) {
        const double f = grid.frequency(m) - grid.fc();
        mean += q(m) * f / e;
        second += q(m) * f * f / e;
    }
    const double spread = second - mean * mean;
    if (!(spread > 0.0))
        return std::numeric_limits<double>::infinity();
    return 1.0 / (8.0 * kPi * kPi * peak_snr(v, h, sigma2) * spread);
}

inline double delay_crb(const Combiner& v, const SubcarrierChannel& h, double sigma2, const FrequencyGrid& grid)
{
    return delay_crb(v.values, h, sigma2, grid);
}

/// Projected gradient ascent of S(v) S_f(v) on the unit sphere, started at
/// MRC. Returns the best iterate seen, so CRB(result) <= CRB(mrc).
inline Combiner crb_min_combiner(const SubcarrierChannel& h, double sigma2, const FrequencyGrid& grid, int iters)
{
    const auto M = static_cast<int>(h.size());
    if (M < 2)
        throw std::invalid_argument("crb_min_combiner: need at least two subcarriers");
    RVector f(M);
    for (int m = 0; m < M; ++m)
        f(m) = (grid.frequency(m) - grid.fc()) / grid.bandwidth();
    const RVector habs2 = h.cwiseAbs2();

    // J(v) = |v^H h|^2 * S_f(v) with frequencies in units of B (||v|| = 1).
    auto objective = [&](const CVector& v, CVector* grad) {
        const RVector q = v.cwiseAbs2().cwiseProduct(habs2);
        const double e = q.sum();
        const double mu = q.dot(f) / e;
        const double spread = q.dot(f.cwiseAbs2()) / e - mu * mu;
        const cdouble s = v.dot(h);
        const double p = std::norm(s);
        if (grad) {
            // Wirtinger gradient d/dv*, doubled.
            CVector g(M);
            for (int m = 0; m < M; ++m) {
                const double dspread = ((f(m) - mu) * (f(m) - mu) - spread) / e;
                g(m) = 2.0 * (h(m) * std::conj(s) * spread + p * dspread * v(m) * habs2(m));
            }
            *grad = g;
        }
        return p * spread;
    };

    CVector v = mrc_combiner(h).values;
    CVector grad;
    double cur = objective(v, &grad);
    CVector best = v;
    double best_val = cur;
    double eta = grad.norm() > 0.0 ? 0.1 / grad.norm() : 0.1;
    for (int it = 0; it < iters && eta > 1e-14; ++it) {
        CVector cand = v + eta * grad;
        cand /= cand.norm();
        CVector cand_grad;
        const double val = objective(cand, &cand_grad);
        if (val > cur) {
            v = std::move(cand);
            grad = std::move(cand_grad);
            cur = val;
            eta *= 1.5;
            if (cur > best_val) {
                best_val = cur;
                best = v;
            }
        } else {
            eta *= 0.5;
        }
    }
    (void)sigma2;
    return normalized(detail::align_phase(best, h), CombinerMethod::crb_min);
}

} // namespace nfisac
