#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urysohn/algebra.hpp"
#include "urysohn/algebra_roots.hpp"
#include "urysohn/metric.hpp"
#include "urysohn/metric_roots.hpp"
#include "urysohn/rohlin.hpp"

namespace urysohn {

using Json = nlohmann::json;

// Plain structures. Rationals are always written as "p/q"; maps are JSON
// objects keyed by source label.

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const EquidistributedAlgebra& a);
/// With check_measure, a "measure" other than 1/(atom count) is a parse error.
EquidistributedAlgebra algebra_from_json(const Json& j, bool check_measure = true);
Json to_json(const SubalgebraInclusion& inc);
SubalgebraInclusion inclusion_from_json(const Json& j);
Json to_json(const AlgebraAutomorphism& g);
AlgebraAutomorphism automorphism_from_json(const Json& j);

Json to_json(const FiniteMetricSpace& s);
FiniteMetricSpace space_from_json(const Json& j);
Json to_json(const Isometry& g);
Isometry isometry_from_json(const Json& j);
Json to_json(const IsometricEmbedding& e);
IsometricEmbedding embedding_from_json(const Json& j);

/// {source label: target label} for map[i] = index of the image of i.
Json map_to_json(const std::vector<std::string>& source, const std::vector<std::string>& target,
                 const std::vector<std::size_t>& map);
/// Inverse of map_to_json. Keys must be exactly the source labels and values
/// target labels; injectivity is not checked.
std::vector<std::size_t> map_from_json(const Json& j, const std::vector<std::string>& source,
                                       const std::vector<std::string>& target);

// Certificates. Each carries a "kind" field.

Json certificate_json(const AlgebraAmalgam& a);
Json certificate_json(const MetricAmalgam& a);
Json certificate_json(const AlgebraRootCertificate& c);
Json certificate_json(const MetricRootCertificate& c);
Json certificate_json(const AlgebraPairTower& t);
Json certificate_json(const MetricPairTower& t);
Json certificate_json(const AlgebraRootTower& t);
Json certificate_json(const MetricRootTower& t);
Json certificate_json(const SuspensionSpace& s);
Json certificate_json(const RohlinResult& r, const FiniteMetricSpace& input_space, const std::vector<std::size_t>& domain,
                      const std::vector<std::size_t>& h, const PeriodSet& periods);
Json qaction_certificate(const AlgebraRootTower& t, std::int64_t k, std::size_t stage);
Json qaction_certificate(const MetricRootTower& t, std::int64_t k, std::size_t stage);

AlgebraPairTower algebra_pair_tower_from_json(const Json& j);
MetricPairTower metric_pair_tower_from_json(const Json& j);
AlgebraRootTower algebra_root_tower_from_json(const Json& j);
MetricRootTower metric_root_tower_from_json(const Json& j);

Json to_json(const PeriodSet& p);
PeriodSet period_set_from_json(const Json& j);

/// The "kind" field, or for plain structures the kind implied by their keys:
/// algebra, inclusion, automorphism, space, isometry, embedding.
std::string infer_kind(const Json& j);

/// Two-space indentation, sorted keys, trailing newline.
std::string dump(const Json& j);
Json parse_json(const std::string& text);
/// Parse errors and unreadable files are both reported as parse errors.
Json load_json_file(const std::filesystem::path& path);

}  // namespace urysohn
