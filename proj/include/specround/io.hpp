#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "specround/concentration.hpp"
#include "specround/expdesign.hpp"
#include "specround/instance.hpp"
#include "specround/netdesign.hpp"
#include "specround/rounding.hpp"
#include "specround/signing.hpp"
#include "specround/sparsify.hpp"

// JSON and CSV (de)serialization. Parse failures throw ParseError.
namespace specround::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

/// {n, m, vectors (m rows of n), x, c, packing {A, a}?, covering {B, b}?}
VectorInstance instance_from_json(const Json& j);
Json instance_to_json(const VectorInstance& inst);

/// Instance fields plus budget, objective, optional V. The instance's x may
/// be omitted; `has_x` reports whether a fractional solution was supplied.
expdesign::DesignProblem design_from_json(const Json& j, bool* has_x = nullptr);

/// Sidecar for an edge-list network instance.
netdesign::NetworkDesignInstance network_from_json(const Json& j, graph::Graph g);

Json to_json(const rounding::RoundingCertificate& c);
Json to_json(const sparsify::SparsifierCertificate& c);
Json to_json(const sparsify::AdditiveReport& r);
Json to_json(const netdesign::ImplicationReport& r);
Json to_json(const netdesign::NetworkSolution& s);
Json to_json(const expdesign::RelaxationResult& r);
Json to_json(const expdesign::DesignRounding& d);
Json to_json(const signing::TwoSidedReport& r);
Json to_json(const concentration::SimulationReport& r);
Json to_json(const concentration::DriftReport& r);

/// t,lambda_min,cost,delta_plus,delta_minus with %.17g numbers.
void write_history_csv(std::ostream& out, const std::vector<rounding::IterationRecord>& history);

}  // namespace specround::io
