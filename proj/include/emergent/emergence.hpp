/*
   Copyright 2026 The emergent authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file emergence.hpp
 * @brief Parameter maps F with S1[phi; eps] = S2[phi; F(eps)], built by combinators and checked numerically.
 *
 * Every combinator returns an EmergenceWitness that has already been run
 * through the verifier. Missing or refuted hypotheses raise HypothesisError
 * before anything is built. A step whose implicit assumption fails for the
 * concrete operators (typically "this operator is a multiple of I") is not an
 * error: the witness comes back with an infeasible verdict naming the step.
 */

#ifndef EMERGENT_EMERGENCE_HPP
#define EMERGENT_EMERGENCE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "theories.hpp"

namespace emergent {

struct ProvenanceNode {
    std::string step;
    std::string detail;
    std::vector<ProvenanceNode> children;
};

class ParamMap {
   public:
    using Eval = std::function<Param(const Param&)>;

    ParamMap(ParamSpace source, ParamSpace target, Eval eval, ProvenanceNode provenance);

    const ParamSpace& source() const noexcept { return source_; }
    const ParamSpace& target() const noexcept { return target_; }
    const ProvenanceNode& provenance() const noexcept { return provenance_; }

    /// Throws SpaceMismatch when `eps` or the result lies outside the declared spaces.
    Param operator()(const Param& eps) const;

   private:
    ParamSpace source_;
    ParamSpace target_;
    Eval eval_;
    ProvenanceNode provenance_;
};

enum class Verdict { verified, refuted, infeasible };

std::string to_string(Verdict v);

struct VerificationReport {
    int samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    double max_action_residual = 0.0;
    double max_operator_residual = 0.0;
    Verdict verdict = Verdict::infeasible;
    std::optional<Param> worst_eps;
    std::string reason;
    /// Step name when a combinator step was infeasible.
    std::string failed_step;
    double infeasible_residual = 0.0;
    /// Both operators were self-adjoint on every sample, so the two residual levels certify each other.
    bool levels_equivalent = false;
};

struct VerifyOptions {
    int samples = 100;
    std::uint64_t seed = 0;
    /// Defaults to 1e-9 for symbol operators and 1e-7 once a dense operator is involved.
    std::optional<double> tol;
};

inline constexpr double symbol_verify_tolerance = 1e-9;
inline constexpr double dense_verify_tolerance = 1e-7;
inline constexpr int min_verify_fields = 8;

struct EmergenceWitness {
    Theory target;
    Theory ambient;
    ParamMap map;
    VerificationReport report;

    bool verified() const noexcept { return report.verdict == Verdict::verified; }
};

/// Checks the map on the given parameters, pairing each with a fresh random field.
/// At least min_verify_fields pairs are drawn; the list is cycled when shorter.
VerificationReport verify_at(const Theory& target, const Theory& ambient, const ParamMap& map,
                             const std::vector<Param>& eps, std::uint64_t field_seed, int samples,
                             std::optional<double> tol = std::nullopt);

/// Parameters drawn from the target space, fields from per-sample seeds.
VerificationReport verify_map(const Theory& target, const Theory& ambient, const ParamMap& map,
                              const VerifyOptions& opts = {});

VerificationReport verify_witness(const EmergenceWitness& w, const VerifyOptions& opts = {});

/// Wraps a caller-supplied map and verifies it.
EmergenceWitness make_witness(const Theory& target, const Theory& ambient, ParamMap map,
                              const VerifyOptions& opts = {});

/* combinators */

/// F = identity; the two theories must share a parameter space.
EmergenceWitness emerge_identity(const Theory& target, const Theory& ambient, const VerifyOptions& opts = {});

/// S1 from S3 through F = second o first, given S1 from S2 and S2 from S3.
EmergenceWitness emerge_transitive(const EmergenceWitness& first, const EmergenceWitness& second,
                                   const VerifyOptions& opts = {});

/// Target against g(delta) Psi^power: F(eps) = g^-1(lambda) with target(eps) o R_{Psi^power} = lambda I.
EmergenceWitness emerge_monomial(const Theory& target, const CoeffFn& g, const Operator& psi, int power,
                                 const ParamSpace& ambient_space, const VerifyOptions& opts = {});

/// Same, reading g, Psi and the power from a monomial or degree-1 scaling ambient.
EmergenceWitness emerge_monomial(const Theory& target, const Theory& ambient, const VerifyOptions& opts = {});

/// Ambient c S2 with F'(eps) = F(eps)/c.
EmergenceWitness emerge_scaled(const EmergenceWitness& w, Complex c, const VerifyOptions& opts = {});

struct LemmaWitness {
    EmergenceWitness witness;
    /// Single-theory map into S3, present when S3 has the needed homomorphy and S2-from-S3 was supplied.
    std::optional<EmergenceWitness> collapsed;
};

/// From S1 <- S2 (F), S1 <- S3 (G) and optionally S2 <- S3 (H): S1 emerges from S2 + S3 with
/// K(eps) = (F(eps/2), G(eps/2)); collapsed map L(eps) = H(F(eps/2)) + G(eps/2).
LemmaWitness emerge_sum(const EmergenceWitness& from_s2, const EmergenceWitness& from_s3,
                        const std::optional<EmergenceWitness>& s2_from_s3 = std::nullopt,
                        const VerifyOptions& opts = {});

/// Same inputs: S1 emerges from S2 o S3 with K(eps) = (F(sqrt eps), G(sqrt eps));
/// collapsed map L(eps) = H(F(sqrt eps)) * G(sqrt eps).
LemmaWitness emerge_composition(const EmergenceWitness& from_s2, const EmergenceWitness& from_s3,
                                const std::optional<EmergenceWitness>& s2_from_s3 = std::nullopt,
                                const VerifyOptions& opts = {});

/// t^m emerges from t^l for a multiplicative t.
EmergenceWitness emerge_powers(const Theory& t, int l, int m, const VerifyOptions& opts = {});

/// Target against a one-variable polynomial, one parameter slot per monomial.
EmergenceWitness emerge_univariate(const Theory& target, const Poly& poly, const VerifyOptions& opts = {});

/// Target against a polynomial in several variables, regrouped by the last variable.
EmergenceWitness emerge_multivariate(const Theory& target, const Poly& poly, const VerifyOptions& opts = {});

struct RecurrencePair {
    EmergenceWitness from_s2;  ///< S1 from S2_j
    EmergenceWitness from_s3;  ///< S1 from S3_j
    std::optional<EmergenceWitness> s2_from_s3;
};

/// The five hypotheses of the recurrence; the vectors indexed by m hold entries for m = 1 .. l-1.
struct RecurrenceHypotheses {
    std::vector<RecurrencePair> pairs;
    /// S3_k from Q_k o m_k with a monomial m_k, for k = 2 .. l
    std::vector<EmergenceWitness> divisibility;
    /// S^m from Q_{m+1}
    std::vector<EmergenceWitness> accumulated_from_quotient;
    /// S2_{m+1} from Q_{m+1}
    std::vector<EmergenceWitness> s2_from_quotient;
    /// S^m from S2_{m+1}
    std::vector<EmergenceWitness> accumulated_from_s2;
};

/// S1 from S^l = sum_j S2_j o S3_j, by induction over l.
EmergenceWitness emerge_recurrence(const Theory& target, const RecurrenceHypotheses& hyp,
                                   const VerifyOptions& opts = {});

/// Picks a combinator from the ambient structure.
EmergenceWitness emerge_auto(const Theory& target, const Theory& ambient, const VerifyOptions& opts = {});

/* quadratic forms */

struct QFormReport {
    bool pass = false;
    double max_abs_q = 0.0;
    /// ||T_rec - T||_F / max(||T||_F, floor), T_rec rebuilt from q by polarization
    double reconstruction_error = 0.0;
    double reconstructed_norm = 0.0;
};

inline constexpr Eigen::Index max_qform_points = 256;

/// Decides q_T = 0 by evaluating q on basis fields and polarization pairs. Passes iff the
/// reconstructed T has Frobenius norm at most tol * scale. Requires T self-adjoint or declared coercive.
QFormReport qform_zero_test(const Operator& t, double tol, double scale = 1.0, bool declared_coercive = false);

}  // namespace emergent

#endif  // EMERGENT_EMERGENCE_HPP
