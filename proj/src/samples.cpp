#include "endspace/samples.hpp"

#include <functional>

#include "endspace/dsl.hpp"

namespace endspace {

namespace {

std::uint64_t pick(Rng& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

std::string affine(Rng& rng) {
  const std::uint64_t a = 1 + pick(rng, 2), b = pick(rng, 4);
  std::string s = a == 1 ? "n" : std::to_string(a) + "*n";
  return b ? s + "+" + std::to_string(b) : s;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

// A stream agreeing with `s` along count(n) repetitions of its period, then branching.
std::string branching_stream(const Stream& s, const std::string& count, Rng& rng) {
  const std::uint64_t d = (s.period()[0] + 1 + pick(rng, 2)) % 3;
  std::string head = s.prefix().empty() ? "" : join(s.prefix()) + ", ";
  return "prefix(" + head + "rep([" + join(s.period()) + "], " + count + "), " + std::to_string(d) + "; period(" +
         std::to_string(pick(rng, 2)) + "))";
}

std::string tail_variant(const HighRay& r, bool moving, Rng& rng) {
  if (const auto* s = std::get_if<Stream>(&r.tail))
    return route_to_dsl(r.route, branching_stream(*s, moving ? affine(rng) : std::to_string(pick(rng, 4)), rng));
  const char* forms[] = {"pos(w*(%))", "pos(w^2)", "pos(w)", "pos(w*#)"};
  std::string f = moving ? forms[0] : forms[1 + pick(rng, 3)];
  if (auto p = f.find('%'); p != std::string::npos) f.replace(p, 1, affine(rng));
  if (auto p = f.find('#'); p != std::string::npos) f.replace(p, 1, std::to_string(1 + pick(rng, 3)));
  return route_to_dsl(r.route, f);
}

// Rays through a top of the target, with the top copy or scion index moving.
std::optional<std::string> through_top(const OrderTree& t, const HighRay& target, Rng& rng) {
  const TopSet ts = t.tops(target);
  if (ts.empty()) return std::nullopt;
  const Addr tau = ts.at(0);
  const auto kids = t.children(tau, 0, 1);
  if (kids.empty()) return std::nullopt;
  const auto r = t.least_ray_through(kids[0]);
  const std::size_t k = target.route.size();
  if (!r || r->route.size() < k + 2 || r->route[k].kind != TokenKind::Top) return std::nullopt;
  const Token& top = r->route[k];
  const HighRay rest{std::vector<Token>(r->route.begin() + static_cast<std::ptrdiff_t>(k + 2), r->route.end()),
                     r->tail};
  std::string copy = std::to_string(top.index), j = std::to_string(r->route[k + 1].index);
  std::string inner;
  switch (pick(rng, 3)) {
    case 0: copy = ts.count ? std::to_string(pick(rng, *ts.count)) : affine(rng); inner = ray_to_dsl(rest); break;
    case 1: j = affine(rng); inner = ray_to_dsl(rest); break;
    default: inner = tail_variant(rest, true, rng); break;
  }
  return route_to_dsl(std::vector<Token>(r->route.begin(), r->route.begin() + static_cast<std::ptrdiff_t>(k)),
                      "scion(" + ray_to_dsl(*top.ray) + ", " + copy + ", " + j + "; " + inner + ")");
}

bool valid(const OrderTree& t, const std::string& text) {
  try {
    const auto seq = SequenceTemplate::parse(text);
    for (std::uint64_t n : {0, 1, 2, 5, 64, 65, 131, 200}) t.check_ray(seq.at(n));
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<ConvergenceSample> convergence_samples(const OrderTree& t, std::size_t count, std::uint64_t seed) {
  std::vector<ConvergenceSample> out;
  if (!t.has_rays()) return out;
  Rng rng(seed);
  for (std::size_t attempt = 0; out.size() < count && attempt < 200 * count; ++attempt) {
    const HighRay target = t.random_ray(rng, 4);
    std::string family, text;
    switch (pick(rng, 6)) {
      case 0: family = "constant-target"; text = ray_to_dsl(target); break;
      case 1: family = "constant-other"; text = ray_to_dsl(t.random_ray(rng, 4)); break;
      case 2: family = "fixed-branch"; text = tail_variant(target, false, rng); break;
      case 3:
      case 4: family = "deepening"; text = tail_variant(target, true, rng); break;
      default:
        family = "through-top";
        if (auto s = through_top(t, target, rng)) text = *s;
        break;
    }
    if (!text.empty() && valid(t, text)) out.push_back({text, target, family});
  }
  return out;
}

}  // namespace endspace
