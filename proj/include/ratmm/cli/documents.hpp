#ifndef RATMM_CLI_DOCUMENTS_HPP
#define RATMM_CLI_DOCUMENTS_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "ratmm/approximant.hpp"
#include "ratmm/certificates.hpp"
#include "ratmm/lawson.hpp"
#include "ratmm/weights.hpp"

namespace ratmm::cli {

using nlohmann::json;

/// Non-finite doubles are written as the strings "inf", "-inf", "nan".
json number(double v);
double to_number(const json& j);

json complex_array(const VectorXc<double>& v);
VectorXc<double> complex_vector(const json& j);

json approximant_to_json(const RationalApproximant<double>& r);
RationalApproximant<double> approximant_from_json(const json& j);

json certificate_to_json(const CertificateReport<double>& rep);

struct SolveSummary {
  LawsonOutcome<double> outcome;
  LawsonConfig config;
  CertificateReport<double> certificate;
  RationalApproximant<double> monomial;
  RationalApproximant<double> orthonormal;
};

json result_to_json(const SolveSummary& s);

/// What `certify` needs from an approximant or result document.
struct CandidateDocument {
  RationalApproximant<double> approximant;
  std::optional<WeightVector<double>> weights;
  std::optional<double> d_value;
};

CandidateDocument candidate_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json(std::ostream& out, const json& j);

}  // namespace ratmm::cli

#endif  // RATMM_CLI_DOCUMENTS_HPP
