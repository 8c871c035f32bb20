#include "hypersteiner/report.hpp"

namespace hypersteiner {

Json rational_json(const Rational& value) {
  Json j;
  j["num"] = value.get_num().get_str();
  j["den"] = value.get_den().get_str();
  j["decimal"] = to_decimal(value);
  return j;
}

Json mask_json(const SteinerInstance& inst, TerminalMask mask) {
  Json out = Json::array();
  for (int i = 0; i < inst.num_terminals(); ++i) {
    if (mask_contains(mask, i)) out.push_back(inst.terminals()[static_cast<std::size_t>(i)]);
  }
  return out;
}

Json instance_json(const SteinerInstance& inst) {
  Json j;
  j["vertices"] = inst.num_vertices();
  j["edges"] = inst.num_edges();
  j["terminals"] = inst.terminals();
  j["quasi_bipartite"] = inst.is_quasi_bipartite();
  return j;
}

Json component_json(const Component& c) {
  Json j;
  j["terminals"] = c.terminals;
  j["edges"] = c.edges;
  j["cost"] = rational_json(c.cost);
  return j;
}

Json lp_json(const FractionalSolution& x, const LpStats* stats) {
  Json j;
  j["objective"] = rational_json(x.objective);
  j["blowup_factor"] = x.blowup_factor();
  Json support = Json::array();
  for (std::size_t i = 0; i < x.components.size(); ++i) {
    Json c = component_json(x.components[i]);
    c["value"] = rational_json(x.values[i]);
    support.push_back(std::move(c));
  }
  j["support"] = std::move(support);
  if (stats) {
    j["pivots"] = stats->pivots;
    j["rows"] = stats->rows;
    j["cut_rounds"] = stats->cut_rounds;
  }
  return j;
}

Json tree_json(const SteinerTree& tree) {
  Json j;
  j["edges"] = tree.edges;
  j["cost"] = rational_json(tree.cost);
  return j;
}

Json certificate_json(const Certificate& c) {
  Json j;
  j["lp_value"] = rational_json(c.lp_value);
  j["N"] = c.n;
  j["support"] = c.support;
  j["strategy"] = to_string(c.strategy);
  j["potential"] = rational_json(c.potential);
  j["binarized_potential"] = rational_json(c.binarized_potential);
  j["fell_back"] = c.fell_back;
  j["contracted_cost"] = rational_json(c.contracted_cost);
  j["tree_cost"] = rational_json(c.tree_cost);
  j["tree_within_potential"] = c.tree_within_potential();
  j["potential_drops_cover_weights"] = c.potential_drops_cover_weights();
  Json its = Json::array();
  for (const auto& it : c.iterations) {
    Json r;
    r["q_vertices"] = it.q_vertices;
    r["q_cost"] = rational_json(it.q_cost);
    r["removed"] = it.removed.size();
    r["cleaned"] = it.cleaned.size();
    r["removed_weight"] = rational_json(it.removed_weight);
    r["potential_before"] = rational_json(it.potential_before);
    r["potential_after"] = rational_json(it.potential_after);
    its.push_back(std::move(r));
  }
  j["iterations"] = std::move(its);
  return j;
}

Json run_json(const SteinerInstance& inst, const RunResult& r, const Rational& bound) {
  Json j;
  j["instance"] = instance_json(inst);
  j["lp"] = lp_json(r.lp);
  j["tree"] = tree_json(r.tree);
  if (sgn(r.lp.objective) > 0) {
    j["ratio"] = rational_json(r.tree.cost / r.lp.objective);
  } else {
    j["ratio"] = nullptr;
  }
  j["bound"] = rational_json(bound);
  j["within_bound"] = r.tree.cost <= bound * r.lp.objective;
  j["certificate"] = certificate_json(r.certificate);
  return j;
}

Json splitting_json(const SplitChoice& choice) {
  const auto& s = choice.state;
  Json j;
  j["edges"] = s.graph.num_edges();
  j["N"] = s.graph.N();
  j["core"] = s.k;
  j["potential"] = rational_json(s.potential);
  j["cost"] = rational_json(s.graph.cost());
  if (sgn(s.graph.cost()) > 0) j["potential_over_cost"] = rational_json(s.potential / s.graph.cost());
  j["binarized"] = s.binarized;
  j["binarized_potential"] = rational_json(choice.binarized_potential);
  j["fell_back"] = choice.fell_back;
  Json w = Json::array();
  for (const auto& [id, weight] : s.weight) {
    Json e;
    e["edge"] = id;
    e["weight"] = rational_json(weight);
    w.push_back(std::move(e));
  }
  j["weights"] = std::move(w);
  return j;
}

Json bcr_json(const SteinerInstance& inst, const BcrSolution& sol) {
  Json j;
  j["root"] = sol.root;
  j["objective"] = rational_json(sol.objective);
  j["cut_rows"] = sol.cut_rows;
  Json arcs = Json::array();
  for (std::size_t a = 0; a < sol.x.size(); ++a) {
    if (sgn(sol.x[a]) == 0) continue;
    const Edge& e = inst.edge(static_cast<int>(a / 2));
    Json r;
    r["from"] = a % 2 == 0 ? e.u : e.v;
    r["to"] = a % 2 == 0 ? e.v : e.u;
    r["edge"] = a / 2;
    r["value"] = rational_json(sol.x[a]);
    arcs.push_back(std::move(r));
  }
  j["arcs"] = std::move(arcs);
  return j;
}

Json decomposition_json(const PartitionDecomposition& d) {
  Json terms = Json::array();
  for (const auto& [lambda, partition] : d.terms) {
    Json t;
    t["lambda"] = rational_json(lambda);
    Json blocks = Json::array();
    for (SubsetMask b : partition) {
      Json block = Json::array();
      for (int i = 0; i < 32; ++i) {
        if ((b >> i) & 1U) block.push_back(i);
      }
      blocks.push_back(std::move(block));
    }
    t["blocks"] = std::move(blocks);
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace hypersteiner
