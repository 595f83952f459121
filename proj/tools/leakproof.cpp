#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "leakproof/error.hpp"
#include "leakproof/flow.hpp"
#include "leakproof/group_leak.hpp"
#include "leakproof/io.hpp"
#include "leakproof/planarity.hpp"

using namespace leakproof;

namespace {

enum Exit { kAffirmative = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

struct Options {
  bool text = false;
  std::optional<std::size_t> max_size;
  unsigned long long seed = 0;
  std::string output;
};

std::size_t group_bound(const Options& o) { return o.max_size.value_or(kDefaultMaxGroupOrder); }
int minor_bound(const Options& o) { return o.max_size ? int(*o.max_size) : kDefaultMaxMinorHost; }

std::string render_text(const Json& j) {
  std::string out;
  for (const auto& [key, value] : j.items()) {
    out += key + ": ";
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += "\n";
  }
  return out;
}

void emit(const Options& o, const Json& j) {
  const std::string body = o.text ? render_text(j) : j.dump() + "\n";
  if (o.output.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + o.output);
  out << body;
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path), path); }

Graph model_graph(const std::string& name) {
  if (name == "k5") return named_graph("complete:5");
  if (name == "k33") return named_graph("complete_bipartite:3,3");
  if (name == "k5minus" || name == "k33minus") return named_graph(name);
  throw CLI::ValidationError("--model", "expected k5, k33, k5minus or k33minus");
}

int cmd_planar(const Options& o, const std::string& path) {
  const Graph g = load_graph(path);
  const PlanarityResult result = test_planarity(g);
  if (const auto* r = std::get_if<RotationSystem>(&result)) {
    Json j = {{"planar", true}};
    j["rotation"] = rotation_to_json(*r)["rotation"];
    emit(o, j);
    return kAffirmative;
  }
  const auto& w = std::get<MinorWitness>(result);
  emit(o, {{"planar", false}, {"witness", witness_to_json(w, g)}});
  return kNegative;
}

int cmd_extra_planar(const Options& o, const std::string& path) {
  const Graph g = load_graph(path);
  const ExtraPlanarResult result = extra_planar(g);
  Json j = {{"extra_planar", result.extra_planar}};
  if (result.failing_pair) {
    j["failing_pair"] = {g.label(result.failing_pair->u), g.label(result.failing_pair->v)};
    if (result.witness) j["witness"] = witness_to_json(*result.witness, witness_host(g, result));
  }
  emit(o, j);
  return result.extra_planar ? kAffirmative : kNegative;
}

int cmd_minor(const Options& o, const std::string& path, const std::string& model) {
  const Graph g = load_graph(path);
  const auto w = find_minor(g, model_graph(model), minor_bound(o));
  Json j = {{"model", model}, {"found", w.has_value()}};
  if (w) j["witness"] = witness_to_json(*w, g);
  emit(o, j);
  return w ? kAffirmative : kNegative;
}

int cmd_faces(const Options& o, const std::string& graph_path, const std::string& rotation_path) {
  const Graph g = load_graph(graph_path);
  const RotationSystem r = rotation_from_json(g, parse_json(read_file(rotation_path), rotation_path));
  emit(o, faces_to_json(r, faces(r)));
  return kAffirmative;
}

int cmd_check_flow(const Options& o, const std::string& path, const std::vector<std::string>& binary) {
  const GroupFlow f = flow_from_json(parse_json(read_file(path), path), group_bound(o));
  if (auto bad = validate_flow(f))
    throw Error(ErrorKind::ParseError, path + ": not a flow at (" + f.graph().label(bad->u) + "," + f.graph().label(bad->v) + ")");
  if (!binary.empty()) {
    const Graph& g = f.graph();
    const Vertex u = g.at(binary[0]), v = g.at(binary[1]);
    const auto leak = detect_binary_leak(f, u, v);
    Json j = {{"kind", leak ? "BinaryLeak" : "NoBinaryLeak"}, {"vertices", {g.label(u), g.label(v)}}};
    if (leak) j["value"] = f.group().name(*leak);
    emit(o, j);
    return leak ? kNegative : kAffirmative;
  }
  const LeakVerdict verdict = detect_leak(f);
  emit(o, leak_verdict_to_json(f, verdict));
  return verdict.kind == LeakVerdict::Kind::ConservingEverywhere ? kAffirmative : kNegative;
}

int cmd_leak_witness(const Options& o, const std::string& path) {
  const Graph g = load_graph(path);
  if (is_planar(g)) {
    emit(o, {{"planar", true}, {"leaking_flow", nullptr}});
    return kNegative;
  }
  emit(o, flow_to_json(synthesize_leaking_flow(g)));
  return kAffirmative;
}

int cmd_group_leakproof(const Options& o, const std::string& spec, const std::string& witness_path) {
  const GroupPtr g = standard_group(spec, group_bound(o));
  const DeltaPresentation d = build_delta(g, {group_bound(o), !witness_path.empty()});
  const GroupLeakVerdict verdict = is_leakproof_group(d);
  Json j = {{"group", g->spec()}, {"leakproof", verdict.leakproof}};
  j["witness"] = verdict.witness ? Json(g->name(*verdict.witness)) : Json(nullptr);
  j["delta_invariant_factors"] = delta_invariant_factors(d);
  if (verdict.witness && !witness_path.empty()) {
    std::ofstream out(witness_path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + witness_path);
    out << flow_to_json(witness_flow_from_kernel(d, *verdict.witness)).dump() << "\n";
  }
  emit(o, j);
  return verdict.leakproof ? kAffirmative : kNegative;
}

int cmd_group_binary(const Options& o, const std::string& spec) {
  const GroupPtr g = standard_group(spec, group_bound(o));
  const BinaryLeakVerdict verdict = is_binary_leakproof_group(build_delta(g, {group_bound(o), false}));
  Json j = {{"group", g->spec()}, {"binary_leakproof", verdict.injective}};
  if (verdict.collision) j["collision"] = {g->name(verdict.collision->first), g->name(verdict.collision->second)};
  emit(o, j);
  return verdict.injective ? kAffirmative : kNegative;
}

int cmd_examples(const Options& o, const std::string& which) {
  if (which == "k33") emit(o, flow_to_json(example_flow_k33()));
  else if (which == "k5") emit(o, flow_to_json(example_flow_k5()));
  else if (which == "k33minus") emit(o, flow_to_json(example_flow_k33minus()));
  else if (which.rfind("graph:", 0) == 0) emit(o, graph_to_json(named_graph(which.substr(6))));
  else throw CLI::ValidationError("examples", "expected k33, k5, k33minus or graph:<name>");
  return kAffirmative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leak-proof flows, planarity certificates and group verdicts"};
  app.require_subcommand(1);
  Options o;
  bool json = false;
  std::size_t max_size = 0;
  app.add_flag("--text", o.text, "Human-readable output");
  app.add_flag("--json", json, "JSON output (default)");
  app.add_option("--max-size", max_size, "Bound on group order or minor host size");
  app.add_option("--seed", o.seed, "Seed for randomized operations");
  app.add_option("-o,--output", o.output, "Write the result to a file");

  std::string path, second, model, spec, which, witness_path;
  std::vector<std::string> binary;

  auto* planar = app.add_subcommand("planar", "Planarity certificate for a graph");
  planar->add_option("graph", path)->required();
  auto* extra = app.add_subcommand("extra-planar", "Is the graph plus any one edge still planar?");
  extra->add_option("graph", path)->required();
  auto* minor = app.add_subcommand("minor", "Search for a fixed minor");
  minor->add_option("graph", path)->required();
  minor->add_option("--model", model)->required();
  auto* face = app.add_subcommand("faces", "Boundary walks of an embedding");
  face->add_option("graph", path)->required();
  face->add_option("rotation", second)->required();
  auto* check = app.add_subcommand("check-flow", "Leak verdict for a flow file");
  check->add_option("flow", path)->required();
  check->add_option("--binary", binary, "Check for a binary leak at u and v")->expected(2);
  auto* witness = app.add_subcommand("leak-witness", "Leaking flow for a non-planar graph");
  witness->add_option("graph", path)->required();
  auto* group = app.add_subcommand("group-leakproof", "Is every flow with values in the group leak-proof?");
  group->add_option("spec", spec)->required();
  group->add_option("--witness-flow", witness_path, "Write a leaking flow here when the group leaks");
  auto* binary_group = app.add_subcommand("group-binary-leakproof", "Is the map into Delta injective?");
  binary_group->add_option("spec", spec)->required();
  auto* examples = app.add_subcommand("examples", "Example flows and named graphs");
  examples->add_option("which", which)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kAffirmative : kUsage;
  }
  if (o.text && json) {
    std::cerr << "--text and --json are exclusive\n";
    return kUsage;
  }
  if (max_size > 0) o.max_size = max_size;

  try {
    if (*planar) return cmd_planar(o, path);
    if (*extra) return cmd_extra_planar(o, path);
    if (*minor) return cmd_minor(o, path, model);
    if (*face) return cmd_faces(o, path, second);
    if (*check) return cmd_check_flow(o, path, binary);
    if (*witness) return cmd_leak_witness(o, path);
    if (*group) return cmd_group_leakproof(o, spec, witness_path);
    if (*binary_group) return cmd_group_binary(o, spec);
    if (*examples) return cmd_examples(o, which);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InternalInvariant ? kInternal : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
