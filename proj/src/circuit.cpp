#include "bellsim/circuit.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace bellsim {
namespace {

const std::vector<int> kBins{0, 1};

struct PartyLabels {
  std::vector<std::string> in, aux, keep, vpath, out, dark;
};

PartyLabels party_labels(int parties) {
  PartyLabels labels;
  if (parties == 2) {
    // Two-party mode names: a,b in; c,f kept-H; d,e exchanged-V; g,h out.
    labels.in = {"a", "b"};
    labels.aux = {"xa", "xb"};
    labels.keep = {"c", "f"};
    labels.vpath = {"d", "e"};
    labels.out = {"g", "h"};
    labels.dark = {"wa", "wb"};
    return labels;
  }
  for (int i = 1; i <= parties; ++i) {
    const std::string suffix = std::to_string(i);
    labels.in.push_back("a" + suffix);
    labels.aux.push_back("x" + suffix);
    labels.keep.push_back("c" + suffix);
    labels.vpath.push_back("v" + suffix);
    labels.out.push_back("g" + suffix);
    labels.dark.push_back("w" + suffix);
  }
  return labels;
}

// The circulators route the vertical-amplitude path of party i to party
// i+1 (mod N): a pure relabeling v_i -> v_{i+1}. For N = 2 this is exactly
// the circulator-pair exchange d <-> e.
TransferMap ring_exchange(const std::vector<std::string>& vpaths) {
  const int n = static_cast<int>(vpaths.size());
  std::vector<ModeLabel> slots_in;
  std::vector<ModeLabel> slots_out;
  for (int bin : kBins)
    for (int i = 0; i < n; ++i)
      for (Pol p : {Pol::H, Pol::V}) {
        slots_in.push_back(mode(vpaths[i], p, bin));
        slots_out.push_back(mode(vpaths[(i + 1) % n], p, bin));
      }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(slots_out.size(), slots_in.size());
  // slots_out[k] is by construction the image of slots_in[k].
  std::map<ModeLabel, Eigen::Index> row_of;
  std::vector<ModeLabel> rows = slots_in;  // same mode set, canonical = input order
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = static_cast<Eigen::Index>(r);
  for (std::size_t c = 0; c < slots_in.size(); ++c) u(row_of.at(slots_out[c]), c) = 1.0;
  return TransferMap(slots_in, rows, std::move(u));
}

TransferMap fold(std::vector<TransferMap> maps) {
  return compose(std::span<const TransferMap>(maps.data(), maps.size()));
}

CircuitSpec build_symmetric(int parties, const DelayModel& delay_model) {
  const PartyLabels L = party_labels(parties);

  CircuitSpec spec;
  spec.kind = parties == 2 ? CircuitKind::SymmetricBsm : CircuitKind::Ghz;
  spec.parties = parties;
  spec.delay = delay_model;
  spec.input_paths = L.in;
  spec.output_paths = L.out;

  spec.stages.push_back({"delay", elements::delay(delay_model, L.in[1])});
  spec.elements.push_back({"delay", {L.in[1]}, delay_model.gamma()});

  std::vector<TransferMap> pbs1;
  for (int i = 0; i < parties; ++i) {
    pbs1.push_back(elements::pbs(L.in[i], L.aux[i], L.keep[i], L.vpath[i], kBins));
    spec.elements.push_back({"pbs", {L.in[i], L.aux[i], L.keep[i], L.vpath[i]}, 0.0});
  }
  spec.stages.push_back({"pbs1", fold(std::move(pbs1))});

  spec.stages.push_back(
      {"exchange", parties == 2 ? elements::circulator_exchange(L.vpath[0], L.vpath[1], kBins)
                                : ring_exchange(L.vpath)});
  for (int i = 0; i < parties; ++i)
    spec.elements.push_back({"circulator", {L.vpath[i], L.vpath[(i + 1) % parties]}, 0.0});

  std::vector<TransferMap> h1;
  for (int i = 0; i < parties; ++i) {
    h1.push_back(elements::hwp(45.0, L.keep[i], kBins));
    h1.push_back(elements::hwp(45.0, L.vpath[i], kBins));
    spec.elements.push_back({"hwp", {L.keep[i]}, 45.0});
    spec.elements.push_back({"hwp", {L.vpath[i]}, 45.0});
  }
  spec.stages.push_back({"h1", fold(std::move(h1))});

  // Party i's second splitter interferes its kept amplitude (now vertical
  // after H1, reflected) with the amplitude received around the ring (now
  // horizontal, transmitted); both exit on the detector-side port.
  std::vector<TransferMap> pbs2;
  for (int i = 0; i < parties; ++i) {
    pbs2.push_back(elements::pbs(L.vpath[i], L.keep[i], L.out[i], L.dark[i], kBins));
    spec.elements.push_back({"pbs", {L.vpath[i], L.keep[i], L.out[i], L.dark[i]}, 0.0});
  }
  spec.stages.push_back({"pbs2", fold(std::move(pbs2))});

  std::vector<TransferMap> h2;
  for (int i = 0; i < parties; ++i) {
    h2.push_back(elements::hwp(22.5, L.out[i], kBins));
    spec.elements.push_back({"hwp", {L.out[i]}, 22.5});
  }
  spec.stages.push_back({"h2", fold(std::move(h2))});

  spec.prep_stage_count = 5;  // through pbs2; h2 + pbs3 belong to the analyzer

  for (int i = 0; i < parties; ++i) {
    spec.wiring[port(L.out[i], Pol::H)] = 2 * i + 1;
    spec.wiring[port(L.out[i], Pol::V)] = 2 * i + 2;
    spec.elements.push_back({"detector-pbs",
                             {L.out[i], "D" + std::to_string(2 * i + 1),
                              "D" + std::to_string(2 * i + 2)},
                             0.0});
  }

  std::vector<TransferMap> all;
  for (const Stage& s : spec.stages) all.push_back(s.map);
  spec.compiled = fold(all);
  all.erase(all.begin() + static_cast<std::ptrdiff_t>(spec.prep_stage_count), all.end());
  spec.compiled_prep = fold(std::move(all));
  return spec;
}

}  // namespace

std::string circuit_kind_name(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::StandardBsm: return "standard_bsm";
    case CircuitKind::SymmetricBsm: return "symmetric_bsm";
    case CircuitKind::Ghz: return "ghz";
  }
  return "?";
}

Scheme scheme_of(CircuitKind kind) {
  return kind == CircuitKind::StandardBsm ? Scheme::Standard : Scheme::Symmetric;
}

CircuitSpec standard_bsm(const DelayModel& delay_model) {
  CircuitSpec spec;
  spec.kind = CircuitKind::StandardBsm;
  spec.parties = 2;
  spec.delay = delay_model;
  spec.input_paths = {"a", "b"};
  spec.output_paths = {"u", "v"};

  spec.stages.push_back({"delay", elements::delay(delay_model, "b")});
  spec.stages.push_back({"bs", elements::bs("a", "b", "u", "v", kBins)});
  spec.prep_stage_count = 2;
  spec.elements.push_back({"delay", {"b"}, delay_model.gamma()});
  spec.elements.push_back({"bs", {"a", "b", "u", "v"}, 0.0});
  spec.elements.push_back({"detector-pbs", {"u", "D1", "D2"}, 0.0});
  spec.elements.push_back({"detector-pbs", {"v", "D3", "D4"}, 0.0});

  spec.wiring[port("u", Pol::H)] = 1;
  spec.wiring[port("u", Pol::V)] = 2;
  spec.wiring[port("v", Pol::H)] = 3;
  spec.wiring[port("v", Pol::V)] = 4;

  std::vector<TransferMap> all;
  for (const Stage& s : spec.stages) all.push_back(s.map);
  spec.compiled = fold(all);
  spec.compiled_prep = spec.compiled;
  return spec;
}

CircuitSpec symmetric_bsm(const DelayModel& delay_model) {
  CircuitSpec spec = build_symmetric(2, delay_model);
  spec.kind = CircuitKind::SymmetricBsm;
  return spec;
}

CircuitSpec ghz_circuit(int parties, const DelayModel& delay_model) {
  if (parties < 2)
    throw std::invalid_argument("ghz_circuit needs at least 2 parties, got " +
                                std::to_string(parties));
  CircuitSpec spec = build_symmetric(parties, delay_model);
  spec.kind = CircuitKind::Ghz;
  return spec;
}

CircuitSpec make_circuit(CircuitKind kind, int parties, const DelayModel& delay_model) {
  switch (kind) {
    case CircuitKind::StandardBsm: return standard_bsm(delay_model);
    case CircuitKind::SymmetricBsm: return symmetric_bsm(delay_model);
    case CircuitKind::Ghz: return ghz_circuit(parties, delay_model);
  }
  throw std::invalid_argument("unknown circuit kind");
}

PhotonicState run_circuit(const CircuitSpec& spec, const PhotonicState& input) {
  return apply_transfer(input, spec.compiled);
}

PhotonicState run_prep(const CircuitSpec& spec, const PhotonicState& input) {
  return apply_transfer(input, spec.compiled_prep);
}

PhotonicState run_stages(const CircuitSpec& spec, const PhotonicState& input,
                         std::size_t count) {
  if (count > spec.stages.size())
    throw std::invalid_argument("circuit has only " + std::to_string(spec.stages.size()) +
                                " stages");
  PhotonicState state = input;
  for (std::size_t i = 0; i < count; ++i) state = apply_transfer(state, spec.stages[i].map);
  return state;
}

std::string CircuitSpec::topology_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["name"] = circuit_kind_name(kind);
  j["parties"] = parties;
  nlohmann::ordered_json d;
  d["l"] = delay.l;
  d["coherence_length"] = delay.coherence_length;
  d["gamma"] = delay.gamma();
  j["delay"] = std::move(d);

  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const ElementInfo& e : elements) {
    nlohmann::ordered_json p;
    p["type"] = e.type;
    p["ports"] = e.ports;
    if (e.type == "hwp") p["angle_deg"] = e.parameter;
    if (e.type == "delay") p["gamma"] = e.parameter;
    parts.push_back(std::move(p));
  }
  j["elements"] = std::move(parts);

  nlohmann::ordered_json elems = nlohmann::ordered_json::array();
  for (const Stage& s : stages) {
    nlohmann::ordered_json e;
    e["stage"] = s.name;
    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (const ModeLabel& m : s.map.modes_in()) in.push_back(m.str());
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ModeLabel& m : s.map.modes_out()) out.push_back(m.str());
    e["modes_in"] = std::move(in);
    e["modes_out"] = std::move(out);
    elems.push_back(std::move(e));
  }
  j["stages"] = std::move(elems);

  nlohmann::ordered_json wires = nlohmann::ordered_json::object();
  for (const auto& [p, d_id] : wiring) wires[p.str()] = "D" + std::to_string(d_id);
  j["wiring"] = std::move(wires);
  j["inputs"] = input_paths;
  j["outputs"] = output_paths;
  return j.dump(2);
}

}  // namespace bellsim
