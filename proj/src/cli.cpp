#include "endspace/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>

#include "endspace/apps.hpp"
#include "endspace/catalog.hpp"
#include "endspace/checks.hpp"
#include "endspace/dsl.hpp"
#include "endspace/oracle.hpp"
#include "endspace/samples.hpp"
#include "endspace/transform.hpp"

namespace endspace {

namespace {

std::uint64_t env_seed() {
  const char* s = std::getenv("ENDSPACE_SEED");
  if (!s || !*s) return 1;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("ENDSPACE_SEED is not a number: ") + s);
  }
}

struct Options {
  std::string tree;
  std::string levels = "canonical";
  std::string seq, target, dot;
  std::uint64_t depth = 0, breadth = 2, max_nodes = 4096;
  std::size_t samples = 100, nodes = 500, pairs = 200;
};

LevelOrderPtr levels_named(const std::string& name) {
  if (name == "canonical") return canonical_levels();
  if (name == "pair-swapped") return pair_swapped_levels();
  throw Error(ErrorCode::ParseError, "unknown level order '" + name + "'");
}

CatalogEntry load(const Options& o) {
  CatalogEntry e = resolve_tree(o.tree);
  if (e.adhesion == AdhesionClass::Uniform) e.graph = uniform_graph(e.tree, levels_named(o.levels));
  return e;
}

// The exact checker speaks for uniform graphs; other entries are compared on
// the uniform graph of their tree.
TGraphPtr uniform_of(const CatalogEntry& e, const Options& o) {
  return e.adhesion == AdhesionClass::Uniform ? e.graph : uniform_graph(e.tree, levels_named(o.levels));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidSpec, "cannot write " + path);
  f << text;
}

Report cmd_validate(const Options& o) {
  const CatalogEntry e = load(o);
  Report rep;
  rep.add({{"check", "validate.parse"}, {"ok", true}, {"tree", e.tree->describe()}});
  const auto tr = truncation_of_size(*e.graph, 120);
  rep.merge(check_tree_lemmas(*e.graph, tr, env_seed()));
  const auto adh = check_adhesion_equivalences(*e.graph, tr);
  rep.merge(adh.report);
  const bool declared_uniform = e.adhesion == AdhesionClass::Uniform;
  rep.check("validate.adhesion_class", adh.finite_adhesion && adh.uniform == declared_uniform,
            {{"declared", declared_uniform ? "uniform" : "finite-not-uniform"},
             {"finite_adhesion", adh.finite_adhesion},
             {"uniform", adh.uniform}});
  return rep;
}

Report cmd_build(const Options& o) {
  const CatalogEntry e = load(o);
  Report rep;
  rep.add({{"check", "build"},
           {"ok", true},
           {"name", e.name},
           {"tree", e.tree->describe()},
           {"graph", e.graph->describe()},
           {"height", e.tree->tree_height().to_string()},
           {"has_rays", e.tree->has_rays()},
           {"adhesion", e.adhesion == AdhesionClass::Uniform ? "uniform" : "finite-not-uniform"}});
  return rep;
}

Json truncation_json(const FiniteTruncation& tr) {
  std::size_t boundary = 0;
  for (bool b : tr.boundary) boundary += b;
  return {{"vertices", tr.size()}, {"edges", tr.edges.size()}, {"boundary", boundary}, {"provenance", tr.provenance}};
}

Report cmd_truncate(const Options& o) {
  const CatalogEntry e = load(o);
  const auto tr = truncate(*e.graph, {o.depth ? o.depth : 4, o.breadth, o.max_nodes});
  if (!o.dot.empty()) write_file(o.dot, to_dot(tr));
  Report rep;
  Json rec = truncation_json(tr);
  rec["vertex_names"] = tr.names;
  rep.check("truncate", true, rec);
  return rep;
}

Report cmd_adhesion(const Options& o) {
  const CatalogEntry e = load(o);
  const auto tr = truncate(*e.graph, {o.depth ? o.depth : 4, o.breadth, o.max_nodes});
  auto adh = check_adhesion_equivalences(*e.graph, tr);
  Report rep = adh.report;
  rep.add({{"check", "adhesion.class"},
           {"ok", true},
           {"finite_adhesion", adh.finite_adhesion},
           {"uniform", adh.uniform}});
  return rep;
}

void require_seq(const Options& o) {
  if (o.seq.empty() || o.target.empty()) throw Error(ErrorCode::ParseError, "--seq and --target are required");
}

Report cmd_converge(const Options& o) {
  require_seq(o);
  const CatalogEntry e = load(o);
  Json rec = converges(*e.tree, SequenceTemplate::parse(o.seq), parse_ray(o.target)).to_json();
  rec["check"] = "converge";
  rec["ok"] = true;
  Report rep;
  rep.add(std::move(rec));
  return rep;
}

Report cmd_oracle(const Options& o) {
  require_seq(o);
  const CatalogEntry e = load(o);
  Json rec = oracle_converges(*e.graph, SequenceTemplate::parse(o.seq), parse_ray(o.target), o.depth ? o.depth : 64)
                 .to_json();
  rec["check"] = "oracle-converge";
  rec["ok"] = true;
  Report rep;
  rep.add(std::move(rec));
  return rep;
}

Report cmd_split(const Options& o) {
  const CatalogEntry e = load(o);
  const auto s = split(e.graph);
  const auto tr = truncate(*s.graph, {o.depth ? o.depth : 4, o.breadth, o.max_nodes});
  if (!o.dot.empty()) write_file(o.dot, split_dot(*s.graph, tr));
  std::size_t vnodes = 0;
  for (const Addr& a : tr.vertices) vnodes += s.tree->is_vnode(a);
  Report rep;
  Json rec = truncation_json(tr);
  rec["vnodes"] = vnodes;
  rep.check("split", true, rec);
  const auto part = verify_partition(*s.tree, *canonical_levels(), tr.vertices);
  rep.check("split.special", part.ok(), {{"classes", part.classes}, {"failures", part.failures}});
  auto adh = check_adhesion_equivalences(*s.graph, tr);
  rep.merge(adh.report);
  rep.check("split.uniform", adh.uniform && adh.finite_adhesion, {{"uniform", adh.uniform}});
  return rep;
}

Report cmd_transport(const Options& o) {
  const CatalogEntry e = load(o);
  const auto s = split(e.graph);
  std::vector<TransportSample> samples;
  for (auto& c : convergence_samples(*s.tree, o.samples, env_seed())) samples.push_back({c.seq, c.target});
  return transport_check(*e.graph, *s.graph, samples, o.depth ? o.depth : 64);
}

std::vector<HighRay> random_ends(const OrderTree& t, std::size_t n, Rng& rng) {
  std::vector<HighRay> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(t.random_ray(rng, 4));
  return out;
}

Report cmd_bipartitions(const Options& o) {
  const CatalogEntry e = load(o);
  Rng rng(env_seed());
  const auto tr = truncation_of_size(*e.graph, o.nodes);
  Report rep = nested_check(*e.tree, tr.vertices, random_ends(*e.tree, 20, rng));
  std::size_t tried = 0, failed = 0;
  for (std::size_t attempt = 0; tried < o.pairs && attempt < 50 * o.pairs && e.tree->has_rays(); ++attempt) {
    const HighRay a = e.tree->random_ray(rng, 4), b = e.tree->random_ray(rng, 4);
    if (e.tree->compare(a, b).relation == RayRelation::Equal) continue;
    ++tried;
    const auto d = distinguish(*e.tree, {a}, {b});
    failed += d.in_first == d.in_second;
  }
  rep.check("distinguish", failed == 0, {{"pairs", tried}, {"failures", failed}});
  return rep;
}

Report cmd_expansion(const Options& o) {
  const CatalogEntry e = load(o);
  Rng rng(env_seed());
  auto ends = random_ends(*e.tree, o.samples, rng);
  for (const Addr& a : truncation_of_size(*e.graph, 60).vertices)
    if (auto r = e.tree->least_ray_through(a)) ends.push_back(*r);
  const auto x = expansion_build(*e.graph);
  Report rep = expansion_verify(*e.graph, x, ends, convergence_samples(*e.tree, 30, env_seed()));
  Ordinal top;
  for (const HighRay& r : ends) top = std::max(top, x.stage(r));
  rep.check("expansion.length", x.length() <= e.tree->tree_height().successor(),
            {{"length", x.length().to_string()}, {"largest_stage", top.to_string()}});
  return rep;
}

Report cmd_compare(const Options& o) {
  const CatalogEntry e = load(o);
  const TGraphPtr g = uniform_of(e, o);
  const std::size_t depth = o.depth ? o.depth : 64;
  Report rep;
  std::size_t decided = 0, contradictions = 0, n = 0;
  for (const auto& s : convergence_samples(*e.tree, o.samples, env_seed())) {
    const auto seq = SequenceTemplate::parse(s.seq);
    const Verdict x = converges(*e.tree, seq, s.target);
    const Verdict y = oracle_converges(*g, seq, s.target, depth);
    const bool bad = contradicts(x, y);
    ++n;
    decided += y.decided();
    contradictions += bad;
    rep.check("compare", !bad,
              {{"seq", s.seq},
               {"target", ray_to_dsl(s.target)},
               {"family", s.family},
               {"exact", x.name()},
               {"oracle", y.name()}});
  }
  rep.check("compare.summary", contradictions == 0,
            {{"graph", g->describe()},
             {"samples", n},
             {"depth", depth},
             {"oracle_decided", decided},
             {"contradictions", contradictions}});
  return rep;
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidHighRay:
    case ErrorCode::InvalidAddress:
    case ErrorCode::TemplateOutsideTree: return 2;
    default: return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ends of T-graphs: constructions, convergence checks and reports", "endspace"};
  app.require_subcommand(1);
  Options o;
  std::function<Report(const Options&)> action;

  auto sub = [&](const char* name, const char* help, Report (*f)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("tree", o.tree, "catalog:NAME or tree DSL")->required();
    s->add_option("--levels", o.levels, "level order: canonical or pair-swapped");
    s->callback([&action, f] { action = f; });
    return s;
  };
  sub("validate", "check the axioms and the declared adhesion class", cmd_validate);
  sub("build", "describe the tree and its graph", cmd_build);
  auto* trunc = sub("truncate", "finite truncation, optionally as DOT", cmd_truncate);
  auto* adh = sub("adhesion", "neighbourhood certificates against a truncation", cmd_adhesion);
  auto* conv = sub("converge", "exact convergence verdict", cmd_converge);
  auto* orc = sub("oracle-converge", "truncation oracle verdict", cmd_oracle);
  auto* spl = sub("split", "limit-splitting transform checks", cmd_split);
  auto* tra = sub("transport", "verdicts on T' and G agree", cmd_transport);
  auto* bip = sub("bipartitions", "nested bipartitions and distinguishing nodes", cmd_bipartitions);
  auto* exp = sub("expansion", "discrete expansion checks", cmd_expansion);
  auto* cmp = sub("compare", "exact checker against the oracle on generated samples", cmd_compare);

  for (auto* s : {trunc, adh, spl}) {
    s->add_option("--depth", o.depth, "truncation depth");
    s->add_option("--breadth", o.breadth, "truncation breadth");
    s->add_option("--max-nodes", o.max_nodes, "node cap");
  }
  for (auto* s : {trunc, spl}) s->add_option("--dot", o.dot, "write DOT to this file");
  for (auto* s : {conv, orc}) {
    s->add_option("--seq", o.seq, "sequence template in n");
    s->add_option("--target", o.target, "target high-ray");
  }
  for (auto* s : {orc, tra, cmp}) s->add_option("--depth", o.depth, "oracle depth");
  for (auto* s : {tra, cmp, exp}) s->add_option("--samples", o.samples, "number of samples");
  bip->add_option("--nodes", o.nodes, "truncation size");
  bip->add_option("--pairs", o.pairs, "end pairs to distinguish");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "endspace: " << e.what() << "\n";
    return 2;
  }
  try {
    const Report rep = action(o);
    out << rep.jsonl();
    return rep.ok() ? 0 : 1;
  } catch (const Error& e) {
    err << "endspace: " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace endspace
