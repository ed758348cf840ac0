#pragma once

#include <json.hpp>

#include "ctd/tdual.hpp"

namespace ctd::io {

/// Insertion-ordered JSON so emitted documents round-trip byte-identically.
using Json = nlohmann::ordered_json;

Json toJson(const TauPoly& p);
Json toJson(const TrigScalar& f, bool withFloat = false);
Json toJson(const SigPtr& sig);
/// Terms-only encoding { "terms": [ { "gens": [...], "coeff": ... } ] }.
Json termsToJson(const InvariantForm& f, bool withFloat = false);
Json toJson(const QuadraticLieAlgebra& g);
Json toJson(const CourantData& data, bool withFloat = false);
Json toJson(const Section& s, const SigPtr& sig, bool withFloat = false);
Json toJson(const InvariantSpinor& s, bool withFloat = false);
Json toJson(const IsoData& iso, bool withFloat = false);
Json toJson(const DualityPackage& pkg, bool withFloat = false);
Json toJson(const ResidualReport& report, bool withFloat = false);

TrigScalar trigFromJson(const Json& j, int baseDim);
SigPtr sigFromJson(const Json& j);
InvariantForm termsFromJson(const Json& j, const SigPtr& sig);
std::shared_ptr<const QuadraticLieAlgebra> qlaFromJson(const Json& j);
CourantData courantFromJson(const Json& j);
Section sectionFromJson(const Json& j, const CourantData& data);
InvariantSpinor spinorFromJson(const Json& j, const CourantData& data);
DualityPackage packageFromJson(const Json& j);

/// FNV-1a 64-bit digest, hex encoded; the input digest of run reports.
std::string digest(const std::string& bytes);

}  // namespace ctd::io
