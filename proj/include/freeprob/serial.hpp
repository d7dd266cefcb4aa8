#pragma once

#include <json.hpp>

#include "freeprob/cumulants.hpp"
#include "freeprob/freegroup.hpp"
#include "freeprob/haagerup.hpp"
#include "freeprob/interval.hpp"
#include "freeprob/partition.hpp"
#include "freeprob/weingarten.hpp"

/*
 * JSON wire formats:
 *   Partition        [[1,4],[2,3]]             sorted blocks of sorted elements
 *   EpsilonPattern   "11**"
 *   StarWord         [{"label": "z1", "exp": "1"}, ...]
 *   ExactScalar      {"re": "p/q", "im": "r/s"}
 *   ReducedWord      [1, -2]                   signed generator indices
 *   GroupFunction    [{"word": [...], "coeff": {...}}, ...]
 * Rationals always serialize as strings.
 */
namespace freeprob {

using nlohmann::json;

json to_json(const Partition& p);
Partition partition_from_json(const json& j);

json to_json(const ExactScalar& z);
ExactScalar scalar_from_json(const json& j);

json to_json(const StarWord& w);
StarWord starword_from_json(const json& j);

json to_json(const GramMatrix& g);
json to_json(const WeingartenMatrix& w);

json to_json(const RationalInterval& iv);
json to_json(const ShiCertificate& cert);
json to_json(const AbcReport& report);
json to_json(const CharacterReport& report);
json to_json(const MultiplierReport& report);
json to_json(const FreeGroupReport& report);
json to_json(const OracleReport& report);
json to_json(const InvarianceReport& report);

json to_json(const ReducedWord& w);
ReducedWord word_from_json(const json& j);
json to_json(const GroupFunction& f);
GroupFunction groupfn_from_json(const json& j);

/// HomPolynomial: {"degree": d, "coeffs": [{"index": ["a","b"], "value": {...}}]}
json to_json(const HomPolynomial& T);
HomPolynomial hompoly_from_json(const json& j);

/// ArrayPolynomial: {"degree": d, "dim": n,
///                   "coeffs": [{"rows": [..], "cols": [..], "value": {...}}]}
json to_json(const ArrayPolynomial& T);
ArrayPolynomial arraypoly_from_json(const json& j);

}  // namespace freeprob
