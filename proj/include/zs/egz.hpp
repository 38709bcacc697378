#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zs/sequence.hpp"

namespace zs {

/// Classification of a short 3-sequence (three terms with central
/// product) over H_27.
enum class Short3Class { Central, Thin, ThickA, ThickB };

const char* to_string(Short3Class c);

/// Certificate that a central-product sequence over H_{p^3} contains a
/// principal part, enabling the constructive reordering to product one.
///
/// `principal` holds p occurrence positions into ambient.terms(); the
/// last one plays the role of g_p. `w` is the ordered product of the
/// ambient sequence in certificate order (principal terms first, the
/// rest in sorted position order); w_vals are the p-1 central values
/// w_i with g_p (g_i ... g_{p-1}) = (g_i ... g_{p-1}) g_p w_i.
struct EgzCertificate {
  Sequence ambient;
  std::vector<int> principal;
  Elem w = 0;
  std::vector<Elem> w_vals;

  /// Positions of all ambient terms in certificate order.
  std::vector<int> base_order() const;

  std::string to_text() const;
};

/// True iff the p positions form a valid principal part of S: all terms
/// non-central and the last does not commute with any partial product of
/// the first p-1.
bool is_principal_part(const Sequence& S, const std::vector<int>& positions);

/// Deterministic principal-part search: candidates maximizing the number
/// of distinct z-classes win, ties broken by smallest position tuple.
std::optional<std::vector<int>> find_principal_part(const Sequence& S);

/// Builds and fully validates a certificate from a chosen principal
/// part; nullopt if S has no central product or the part is invalid.
std::optional<EgzCertificate> make_certificate(const Sequence& S,
                                               const std::vector<int>& principal);

/// Certificate iff S has central product and a principal part.
std::optional<EgzCertificate> certify_egz(const Sequence& S);

/// The constructive reordering: an explicit permutation of ALL ambient
/// terms multiplying to the identity. Fails an internal assertion only
/// on invalid certificates.
Witness egz_reorder_to_one(const EgzCertificate& cert);

/// Generalization used by the length-27 extractor: reorder the ambient
/// terms so the total product equals `target` (any central value is
/// achievable, since {w} union {w*w_i} covers Z(G)).
std::optional<Witness> egz_reorder_to_central(const EgzCertificate& cert, Elem target);

/// Requires x1*x2*x3 central; throws std::invalid_argument otherwise.
Short3Class classify_short3(const GroupTable& G, const std::array<Elem, 3>& x);

/// Combines two non-central short 3-sequences into an EGZ certificate
/// for U1.U2 when the constructive hypotheses hold (terms from four
/// distinct z-classes, or two classes with a thick member); nullopt
/// otherwise.
std::optional<EgzCertificate> combine_twin_short3(const GroupTable& G,
                                                  const std::array<Elem, 3>& u1,
                                                  const std::array<Elem, 3>& u2);

/// Given non-central g1..g4 with g1*g2 and g3*g4 central, g1 and g3 in
/// distinct z-classes, and a central u: an ordering of g1..g4 followed
/// by u with total product one.
std::optional<Witness> four_term_center_fix(const GroupTable& G, Elem g1, Elem g2, Elem g3,
                                            Elem g4, Elem u);

/// Maps an ordering of term instances (values given per instance) to a
/// Witness with occurrence indices consistent with the multiset of those
/// values.
Witness witness_from_instances(const GroupTable& G, const std::vector<Elem>& instance_values,
                               const std::vector<int>& order, Elem target);

}  // namespace zs
