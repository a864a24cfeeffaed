// Copyright 2026 The eaqmac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/error.hpp"
#include "eaqmac/gf.hpp"
#include "eaqmac/matf.hpp"

namespace eaqmac {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultMaxDim = 4096;

/// Exponent vector of an N-qudit Weyl operator: X-exponents first, then Z.
struct PauliVector {
    std::vector<FieldElem> components;

    std::size_t qudits() const noexcept { return components.size() / 2; }
    std::span<const FieldElem> x_part() const { return {components.data(), qudits()}; }
    std::span<const FieldElem> z_part() const { return {components.data() + qudits(), qudits()}; }
};

/// Dense square complex matrix, row-major.
struct CMatrix {
    std::size_t n = 0;
    std::vector<Complex> data;

    explicit CMatrix(std::size_t size = 0) : n(size), data(size * size) {}

    static CMatrix identity(std::size_t size) {
        CMatrix out(size);
        for (std::size_t i = 0; i < size; ++i) out(i, i) = 1.0;
        return out;
    }

    Complex &operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

    friend CMatrix operator*(const CMatrix &a, const CMatrix &b) {
        CMatrix out(a.n);
        for (std::size_t i = 0; i < a.n; ++i)
            for (std::size_t k = 0; k < a.n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0)) continue;
                for (std::size_t j = 0; j < a.n; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    CMatrix scaled(Complex s) const {
        CMatrix out = *this;
        for (auto &v : out.data) v *= s;
        return out;
    }

    CMatrix adjoint() const {
        CMatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    static CMatrix kron(const CMatrix &a, const CMatrix &b) {
        CMatrix out(a.n * b.n);
        for (std::size_t i = 0; i < a.n; ++i)
            for (std::size_t j = 0; j < a.n; ++j)
                for (std::size_t k = 0; k < b.n; ++k)
                    for (std::size_t l = 0; l < b.n; ++l) out(i * b.n + k, j * b.n + l) = a(i, j) * b(k, l);
        return out;
    }

    double max_abs_diff(const CMatrix &o) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) worst = std::max(worst, std::abs(data[i] - o.data[i]));
        return worst;
    }
};

/// omega^k with omega = exp(2 pi i / p).
inline Complex omega_power(const FieldSpec &field, std::uint64_t k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % field.p()) / static_cast<double>(field.p());
    return std::polar(1.0, angle);
}

/// X(x) Z(z) on one qudit: |j> -> omega^{tr(j z)} |j + x>.
inline CMatrix weyl(const FieldSpec &field, FieldElem x, FieldElem z) {
    CMatrix out(field.order());
    for (std::uint32_t j = 0; j < field.order(); ++j) {
        const FieldElem fj{j};
        out(field.add(fj, x).value, j) = omega_power(field, field.trace(field.mul(fj, z)).value);
    }
    return out;
}

/// <u, v> = u_X . v_Z - u_Z . v_X over F_d.
inline FieldElem symplectic_form(const FieldSpec &field, std::span<const FieldElem> u, std::span<const FieldElem> v) {
    if (u.size() != v.size() || u.size() % 2 != 0)
        throw Error(ErrorKind::DimensionMismatch, "symplectic_form needs two vectors of the same even length");
    const std::size_t n = u.size() / 2;
    FieldElem acc = field.zero();
    for (std::size_t i = 0; i < n; ++i) {
        acc = field.add(acc, field.mul(u[i], v[n + i]));
        acc = field.sub(acc, field.mul(u[n + i], v[i]));
    }
    return acc;
}

inline FieldElem symplectic_form(const FieldSpec &field, const PauliVector &u, const PauliVector &v) {
    return symplectic_form(field, u.components, v.components);
}

namespace detail {

inline std::size_t state_dimension(const FieldSpec &field, std::size_t qudits, std::size_t max_dim) {
    std::uint64_t dim = 1;
    for (std::size_t n = 0; n < qudits; ++n) {
        dim = saturating_mul(dim, field.order());
        if (dim > max_dim) {
            std::ostringstream os;
            os << "d^N = " << field.order() << '^' << qudits << " exceeds the simulator cap of " << max_dim;
            throw Error(ErrorKind::StateTooLarge, os.str());
        }
    }
    return static_cast<std::size_t>(dim);
}

}  // namespace detail

/// W(x) = X(x_1)Z(x_{1+N}) (x) ... (x) X(x_N)Z(x_{2N}), qudit 1 most significant.
inline CMatrix big_weyl(const FieldSpec &field, std::span<const FieldElem> x, std::size_t max_dim = kDefaultMaxDim) {
    if (x.size() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "Pauli vector must have even length");
    const std::size_t n = x.size() / 2;
    detail::state_dimension(field, n, max_dim);
    CMatrix out = CMatrix::identity(1);
    for (std::size_t q = 0; q < n; ++q) out = CMatrix::kron(out, weyl(field, x[q], x[n + q]));
    return out;
}

/// Pure state of N qudits of dimension d.
class QuditState {
  public:
    QuditState(Field field, std::size_t qudits, std::size_t max_dim = kDefaultMaxDim)
        : field_(std::move(field)), qudits_(qudits), amplitudes_(detail::state_dimension(*field_, qudits, max_dim)) {
        amplitudes_[0] = 1.0;
    }

    const Field &field() const noexcept { return field_; }
    std::size_t qudits() const noexcept { return qudits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::vector<Complex> &amplitudes() noexcept { return amplitudes_; }
    const std::vector<Complex> &amplitudes() const noexcept { return amplitudes_; }

    double norm() const {
        double s = 0.0;
        for (const auto &a : amplitudes_) s += std::norm(a);
        return std::sqrt(s);
    }

    void normalize() {
        const double nrm = norm();
        for (auto &a : amplitudes_) a /= nrm;
    }

    Complex inner(const QuditState &o) const {
        Complex s = 0.0;
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::conj(amplitudes_[i]) * o.amplitudes_[i];
        return s;
    }

  private:
    Field field_;
    std::size_t qudits_ = 0;
    std::vector<Complex> amplitudes_;
};

/// In place |psi> <- phase * W(x) |psi>, without forming the d^N x d^N matrix.
inline void apply_weyl(QuditState &state, std::span<const FieldElem> x, Complex phase = 1.0) {
    const auto &field = *state.field();
    const std::size_t n = state.qudits();
    if (x.size() != 2 * n) throw Error(ErrorKind::DimensionMismatch, "Pauli vector length must be 2N");
    const std::uint32_t d = field.order();
    std::vector<std::vector<std::uint32_t>> shifted(n, std::vector<std::uint32_t>(d));
    std::vector<std::vector<std::uint32_t>> exponent(n, std::vector<std::uint32_t>(d));
    for (std::size_t q = 0; q < n; ++q)
        for (std::uint32_t j = 0; j < d; ++j) {
            shifted[q][j] = field.add(FieldElem{j}, x[q]).value;
            exponent[q][j] = field.trace(field.mul(FieldElem{j}, x[n + q])).value;
        }
    std::vector<Complex> roots(field.p());
    for (std::uint32_t k = 0; k < field.p(); ++k) roots[k] = phase * omega_power(field, k);

    const auto &in = state.amplitudes();
    std::vector<Complex> out(in.size());
    std::vector<std::uint32_t> digits(n, 0);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        std::size_t target = 0;
        std::uint64_t e = 0;
        for (std::size_t q = 0; q < n; ++q) {
            target = target * d + shifted[q][digits[q]];
            e += exponent[q][digits[q]];
        }
        out[target] = roots[e % field.p()] * in[idx];
        for (std::size_t q = n; q-- > 0;) {
            if (++digits[q] < d) break;
            digits[q] = 0;
        }
    }
    state.amplitudes() = std::move(out);
}

inline QuditState encode(const QuditState &state, const PauliVector &x) {
    QuditState out = state;
    apply_weyl(out, x.components);
    return out;
}

/// Basis of a Lagrangian (maximal isotropic) subspace of F_d^{2N} together
/// with one phase per stabilizer generator.
///
/// Generators form an F_p-basis of the subspace: generator g = j*r + k is
/// beta_k * vectors[j], where beta_k = x^k is the k-th polynomial basis element.
struct IsotropicBasis {
    Field field;
    std::size_t qudits = 0;
    std::vector<PauliVector> vectors;
    std::vector<Complex> phases;

    std::size_t generator_count() const noexcept { return vectors.size() * field->r(); }

    PauliVector generator(std::size_t g) const {
        const std::uint32_t r = field->r();
        FieldElem beta{1};
        for (std::uint32_t k = 0; k < g % r; ++k) beta = FieldElem{beta.value * field->p()};
        PauliVector out = vectors[g / r];
        for (auto &v : out.components) v = field->mul(beta, v);
        return out;
    }
};

namespace detail {

// c with (c W(g))^p = I: W(g)^p = I for odd p, and (-1)^{tr(g_X . g_Z)} I for p = 2.
inline Complex base_phase(const FieldSpec &field, const PauliVector &g) {
    if (field.p() != 2) return 1.0;
    FieldElem dot = field.zero();
    for (std::size_t q = 0; q < g.qudits(); ++q) dot = field.add(dot, field.mul(g.x_part()[q], g.z_part()[q]));
    return field.trace(dot).value == 0 ? Complex(1.0) : Complex(0.0, 1.0);
}

inline MatF to_matrix(const Field &field, const std::vector<PauliVector> &rows, std::size_t width) {
    MatF out(field, rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) out(i, j) = rows[i].components[j];
    return out;
}

}  // namespace detail

inline bool is_isotropic(const FieldSpec &field, const std::vector<PauliVector> &vectors) {
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j)
            if (symplectic_form(field, vectors[i], vectors[j]).value != 0) return false;
    return true;
}

/// Extends an isotropic, linearly independent row set (each row of length 2N)
/// to a Lagrangian basis whose first rows are the given ones. Each step adds the
/// first vector of the symplectic complement that is not already spanned.
inline IsotropicBasis lagrangian_completion(const Field &field, const MatF &rows) {
    if (rows.cols() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "isotropic rows must have even length");
    const std::size_t n = rows.cols() / 2;
    IsotropicBasis basis{field, n, {}, {}};
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        const auto r = rows.row(i);
        basis.vectors.push_back(PauliVector{{r.begin(), r.end()}});
    }
    if (!rows.empty() && mat_rank(rows) != rows.rows())
        throw Error(ErrorKind::CompletionFailure, "input rows are linearly dependent");
    if (!is_isotropic(*field, basis.vectors)) throw Error(ErrorKind::CompletionFailure, "input rows are not isotropic");
    if (rows.rows() > n) throw Error(ErrorKind::CompletionFailure, "more than N isotropic rows");

    while (basis.vectors.size() < n) {
        // w is orthogonal to u iff (u_Z | -u_X) . w = 0
        const auto current = detail::to_matrix(field, basis.vectors, 2 * n);
        MatF constraints(field, current.rows(), 2 * n);
        for (std::size_t i = 0; i < current.rows(); ++i)
            for (std::size_t q = 0; q < n; ++q) {
                constraints(i, q) = current(i, n + q);
                constraints(i, n + q) = field->neg(current(i, q));
            }
        const MatF complement = current.rows() ? null_space(constraints) : MatF::identity(field, 2 * n);
        bool extended = false;
        for (std::size_t i = 0; i < complement.rows() && !extended; ++i) {
            const MatF candidate = submatrix(complement, i, 0, 1, 2 * n);
            const std::size_t rk = current.rows() ? mat_rank(vstack(current, candidate)) : mat_rank(candidate);
            if (rk > current.rows()) {
                const auto r = candidate.row(0);
                basis.vectors.push_back(PauliVector{{r.begin(), r.end()}});
                extended = true;
            }
        }
        if (!extended) throw Error(ErrorKind::CompletionFailure, "symplectic complement is exhausted");
    }
    for (std::size_t g = 0; g < basis.generator_count(); ++g)
        basis.phases.push_back(detail::base_phase(*field, basis.generator(g)));
    return basis;
}

/// Completes the row space of [Ml | Mr].
inline IsotropicBasis lagrangian_completion(const SOMatrix &so) {
    if (!check_so(so)) throw Error(ErrorKind::CompletionFailure, "input is not self-orthogonal");
    return lagrangian_completion(so.left.field(), so.combined());
}

/// Rows (-Mr_i | Ml_i). Measuring c W(u_i) on W(x)|psi> returns
/// omega^{tr((M x)_i)}, so these are the observables the receiver reads.
/// They span an isotropic space exactly when M is self-orthogonal.
inline MatF readout_rows(const SOMatrix &so) {
    return hstack(mat_neg(so.right), so.left);
}

namespace detail {

inline void project(QuditState &state, const IsotropicBasis &basis) {
    const std::uint32_t p = basis.field->p();
    for (std::size_t g = 0; g < basis.generator_count(); ++g) {
        const PauliVector gen = basis.generator(g);
        QuditState current = state;
        auto acc = state.amplitudes();
        for (std::uint32_t t = 1; t < p; ++t) {
            apply_weyl(current, gen.components, basis.phases[g]);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += current.amplitudes()[i];
        }
        for (auto &a : acc) a /= static_cast<double>(p);
        state.amplitudes() = std::move(acc);
    }
}

}  // namespace detail

/// tr of the joint projector prod_g (1/p) sum_t (c_g W(g))^t; equals 1 for a
/// Lagrangian basis with consistent phases.
inline double joint_projector_trace(const IsotropicBasis &basis, std::size_t max_dim = kDefaultMaxDim) {
    const std::size_t dim = detail::state_dimension(*basis.field, basis.qudits, max_dim);
    double trace = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        QuditState e(basis.field, basis.qudits, max_dim);
        e.amplitudes()[0] = 0.0;
        e.amplitudes()[j] = 1.0;
        detail::project(e, basis);
        trace += e.amplitudes()[j].real();
    }
    return trace;
}

struct PreparedState {
    IsotropicBasis basis;  // phases as finally assigned
    QuditState state;
};

/// Projects |0...0> onto the joint +1 eigenspace of all generators. If the
/// projection vanishes, single generator phases are multiplied by omega^k in
/// lexicographic order (generator, then k); a seeded random start vector is the
/// last resort.
inline PreparedState stabilizer_state(IsotropicBasis basis, std::size_t max_dim = kDefaultMaxDim) {
    if (basis.vectors.size() != basis.qudits)
        throw Error(ErrorKind::PhaseAssignmentFailure, "basis is not maximal (need N vectors)");
    const auto &field = *basis.field;
    constexpr double kVanish = 1e-6;
    const auto base_phases = basis.phases;

    auto attempt = [&](const QuditState &start) -> std::optional<QuditState> {
        QuditState s = start;
        detail::project(s, basis);
        if (s.norm() < kVanish) return std::nullopt;
        s.normalize();
        return s;
    };

    const QuditState zero_start(basis.field, basis.qudits, max_dim);
    if (auto s = attempt(zero_start)) return {basis, std::move(*s)};
    for (std::size_t g = 0; g < basis.generator_count(); ++g)
        for (std::uint32_t k = 1; k < field.p(); ++k) {
            basis.phases = base_phases;
            basis.phases[g] *= omega_power(field, k);
            if (auto s = attempt(zero_start)) return {basis, std::move(*s)};
        }
    basis.phases = base_phases;
    QuditState random_start(basis.field, basis.qudits, max_dim);
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (auto &a : random_start.amplitudes()) a = Complex(gauss(rng), gauss(rng));
    random_start.normalize();
    if (auto s = attempt(random_start)) return {basis, std::move(*s)};
    throw Error(ErrorKind::PhaseAssignmentFailure, "no simultaneous eigenstate found");
}

struct Measurement {
    std::vector<FieldElem> y;
    double min_modulus = 1.0;  // smallest |<psi| c W(g) |psi>| seen
};

namespace detail {

// Elements delta_k with tr(beta_j delta_k) = [j == k], beta_j = x^j.
inline std::vector<FieldElem> trace_dual_basis(const FieldSpec &field) {
    const std::uint32_t r = field.r();
    std::vector<FieldElem> beta(r), dual(r);
    FieldElem b{1};
    for (std::uint32_t k = 0; k < r; ++k) {
        beta[k] = b;
        b = FieldElem{b.value * field.p()};
    }
    for (std::uint32_t k = 0; k < r; ++k) {
        bool found = false;
        for (std::uint32_t z = 0; z < field.order() && !found; ++z) {
            bool match = true;
            for (std::uint32_t j = 0; j < r && match; ++j)
                match = field.trace(field.mul(beta[j], FieldElem{z})).value == (j == k ? 1u : 0u);
            if (match) {
                dual[k] = FieldElem{z};
                found = true;
            }
        }
        if (!found) throw Error(ErrorKind::AmbiguousCharacter, "trace form is degenerate");
    }
    return dual;
}

}  // namespace detail

/// Reads the first `rows` basis vectors as commuting observables. For each
/// generator the expectation must be a p-th root of unity omega^t; t is
/// tr(beta_k y_i), and y_i is rebuilt through the trace-dual basis.
inline Measurement measure_rows(const QuditState &state, const IsotropicBasis &basis, std::size_t rows) {
    const auto &field = *basis.field;
    if (rows > basis.vectors.size()) throw Error(ErrorKind::DimensionMismatch, "more rows requested than basis vectors");
    if (state.qudits() != basis.qudits) throw Error(ErrorKind::DimensionMismatch, "state and basis qudit counts differ");
    const std::uint32_t r = field.r(), p = field.p();
    const auto dual = detail::trace_dual_basis(field);
    Measurement out;
    out.y.assign(rows, field.zero());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::uint32_t k = 0; k < r; ++k) {
            const std::size_t g = i * r + k;
            QuditState moved = state;
            apply_weyl(moved, basis.generator(g).components, basis.phases[g]);
            const Complex e = state.inner(moved);
            const double modulus = std::abs(e);
            out.min_modulus = std::min(out.min_modulus, modulus);
            if (modulus < 1.0 - 1e-6) {
                std::ostringstream os;
                os << "row " << i << " expectation has modulus " << modulus;
                throw Error(ErrorKind::NondeterministicOutcome, os.str());
            }
            std::uint32_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::uint32_t t = 0; t < p; ++t) {
                const double dist = std::abs(e - omega_power(field, t));
                if (dist < best_dist) {
                    best_dist = dist;
                    best = t;
                }
            }
            if (best_dist > 1e-6) {
                std::ostringstream os;
                os << "row " << i << " expectation " << e << " is not a p-th root of unity";
                throw Error(ErrorKind::AmbiguousCharacter, os.str());
            }
            out.y[i] = field.add(out.y[i], field.mul(field.from_int(best), dual[k]));
        }
    }
    return out;
}

struct EndToEndResult {
    std::vector<FieldElem> first;   // decoded Y^(1)
    std::vector<FieldElem> second;  // decoded Y^(2)
    std::vector<FieldElem> y;       // calibrated outcome, equals M x
    double min_modulus = 1.0;
};

/// Shared-state simulation of one plan: the stabilizer state and the
/// calibration are computed once, then each `run` encodes fresh data.
class PlanSimulator {
  public:
    explicit PlanSimulator(const EncodingPlan &plan, std::size_t max_dim = kDefaultMaxDim)
        : plan_(plan), prepared_(prepare(plan, max_dim)) {
        calibrate();
    }

    std::size_t dimension() const noexcept { return prepared_.state.dimension(); }
    const PreparedState &prepared() const noexcept { return prepared_; }
    /// +1 or -1 per outcome row, read from unit-vector probes.
    const std::vector<int> &calibration() const noexcept { return signs_; }

    /// Raw readout (before calibration) for an arbitrary Pauli exponent vector.
    Measurement measure_raw(const PauliVector &x) const {
        return measure_rows(encode(prepared_.state, x), prepared_.basis, plan_.so.kappa());
    }

    EndToEndResult run(std::span<const FieldElem> w1, std::span<const FieldElem> w2) const {
        const PauliVector x{plan_input(plan_, w1, w2)};
        auto meas = measure_raw(x);
        const auto &field = *plan_.problem.field();
        EndToEndResult out;
        out.min_modulus = meas.min_modulus;
        for (std::size_t i = 0; i < meas.y.size(); ++i)
            out.y.push_back(signs_[i] > 0 ? meas.y[i] : field.neg(meas.y[i]));
        auto decoded = classical_decode(plan_, out.y);
        out.first = std::move(decoded.first);
        out.second = std::move(decoded.second);
        return out;
    }

  private:
    static PreparedState prepare(const EncodingPlan &plan, std::size_t max_dim) {
        detail::state_dimension(*plan.problem.field(), plan.qudits(), max_dim);
        if (!check_so(plan.so)) throw Error(ErrorKind::CompletionFailure, "plan transfer matrix is not self-orthogonal");
        return stabilizer_state(lagrangian_completion(plan.problem.field(), readout_rows(plan.so)), max_dim);
    }

    void calibrate() {
        const auto &field = *plan_.problem.field();
        const std::size_t n = plan_.qudits(), kappa = plan_.so.kappa();
        const MatF expected = plan_.so.combined();
        MatF response(plan_.problem.field(), kappa, 2 * n);
        for (std::size_t col = 0; col < 2 * n; ++col) {
            PauliVector probe{std::vector<FieldElem>(2 * n, field.zero())};
            probe.components[col] = field.one();
            const auto meas = measure_raw(probe);
            for (std::size_t i = 0; i < kappa; ++i) response(i, col) = meas.y[i];
        }
        const MatF negated = mat_neg(response);
        signs_.assign(kappa, 0);
        for (std::size_t i = 0; i < kappa; ++i) {
            const auto want = expected.row(i);
            if (std::equal(want.begin(), want.end(), response.row(i).begin()))
                signs_[i] = 1;
            else if (std::equal(want.begin(), want.end(), negated.row(i).begin()))
                signs_[i] = -1;
            else
                throw Error(ErrorKind::CalibrationFailure, "row " + std::to_string(i) + " response is not +-M");
        }
    }

    EncodingPlan plan_;
    PreparedState prepared_;
    std::vector<int> signs_;
};

inline EndToEndResult end_to_end(const EncodingPlan &plan, std::span<const FieldElem> w1, std::span<const FieldElem> w2,
                                 std::size_t max_dim = kDefaultMaxDim) {
    return PlanSimulator(plan, max_dim).run(w1, w2);
}

}  // namespace eaqmac
