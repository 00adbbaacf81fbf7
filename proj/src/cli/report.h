#pragma once

#include <string>

#include <json.hpp>

#include "osr/dynamics.h"
#include "osr/jsr.h"
#include "osr/lyapunov.h"
#include "osr/spectral.h"

namespace osr::cli {

using Json = nlohmann::ordered_json;

Json ToJson(Complex z);
/// Array of rows, each an array of [re, im] pairs.
Json ToJson(const ComplexMatrix& m);
Json ToJson(const MatrixTuple& x);
Json ToJson(const MaximalSpectrum& s);
Json ToJson(const JsrBracket& b);
Json ToJson(const LyapunovCertificate& c);
Json ToJson(const DynamicsReport& r);
Json ToJson(const PfConjugation& p);

/// Plain-text rendering of a report document.
std::string RenderHuman(const Json& report);

}  // namespace osr::cli
