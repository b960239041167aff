#pragma once

// JSON encodings of the library's values. Rationals are always "num/den"
// strings and every list comes out in a canonical order, so equal values
// serialize to identical bytes.

#include <string>

#include <json.hpp>

#include "pearl/covers.hpp"
#include "pearl/feynman.hpp"
#include "pearl/pearls.hpp"
#include "pearl/quasimod.hpp"
#include "pearl/series.hpp"

namespace pearl {

using nlohmann::json;

/// Thrown for well-formed JSON that does not describe the expected value.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

json to_json(const PearlChain& chain);
/// Validates the result; throws FormatError with the violations otherwise.
PearlChain pearl_chain_from_json(const json& j);

json to_json(const TruncatedSeries& s);
TruncatedSeries truncated_series_from_json(const json& j);

/// Coefficient list, index = q-power.
json coefficients_json(const QSeries& s);

json to_json(const GeneratingSeries& s);
json to_json(const GeneratingReport& r);
json to_json(const CoverCountReport& r);
json to_json(const CoverDatum& c);
json to_json(const ValidationReport& r);

/// Univariate series from any of: a coefficient list, an object with
/// "coeffs" (generating series), or a series object with no x-variables and
/// one q-variable.
QSeries qseries_from_json(const json& j);

/// Fixed provenance note attached to every generating-series output.
json series_metadata(bool normalized);

/// Canonical text form used for output and the cache.
std::string dump_canonical(const json& j);

} // namespace pearl
