#pragma once

#include <nlohmann/json.hpp>

#include "hypersteiner/bcr_quasi.hpp"
#include "hypersteiner/contract_alg.hpp"
#include "hypersteiner/partition_decomp.hpp"
#include "hypersteiner/sepflow.hpp"

namespace hypersteiner {

using Json = nlohmann::ordered_json;

/// {"num": "3", "den": "4", "decimal": "0.750000"}. Numerator and denominator are
/// strings so that large values survive any JSON reader.
Json rational_json(const Rational& value);
Json mask_json(const SteinerInstance& inst, TerminalMask mask);

Json instance_json(const SteinerInstance& inst);
Json component_json(const Component& c);
Json lp_json(const FractionalSolution& x, const LpStats* stats = nullptr);
Json tree_json(const SteinerTree& tree);
Json certificate_json(const Certificate& c);
Json run_json(const SteinerInstance& inst, const RunResult& r, const Rational& bound);
Json splitting_json(const SplitChoice& choice);
Json bcr_json(const SteinerInstance& inst, const BcrSolution& sol);
Json decomposition_json(const PartitionDecomposition& d);

}  // namespace hypersteiner
