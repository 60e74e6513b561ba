#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "endspace/order_tree.hpp"

namespace endspace {

enum class SpecKind { Chain, InfTree, Fan, WithTops, Graft };

/// View of a high-ray starting at route position k.
struct RayView {
  const HighRay* ray;
  std::size_t k = 0;

  bool at_tail() const { return k == ray->route.size(); }
  const Token& head() const { return ray->route[k]; }
  RayView skip(std::size_t d) const { return {ray, k + d}; }
};

class Spec;
using SpecPtr = std::shared_ptr<const Spec>;
/// Child or scion template: instance for index i (memoized by the owner).
using SpecTemplate = std::function<SpecPtr(std::uint64_t)>;

/// Immutable combinator presentation of an order tree. Addresses and rays
/// passed to these methods are local to the combinator.
class Spec {
 public:
  virtual ~Spec() = default;
  virtual SpecKind kind() const = 0;
  virtual std::string to_string() const = 0;

  virtual Addr root() const = 0;
  virtual void check_addr(AddrView a) const = 0;
  virtual Ordinal height(AddrView a) const = 0;
  virtual bool le(AddrView a, AddrView b) const = 0;
  virtual Addr ancestor(AddrView a, const Ordinal& h) const = 0;
  virtual std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const = 0;
  virtual Card child_count(AddrView a) const = 0;
  virtual std::optional<Ordinal> min_limit_above(AddrView a) const = 0;
  virtual Ordinal tree_height() const = 0;
  virtual void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const = 0;

  virtual void check_ray(RayView r) const = 0;
  virtual Ordinal order_type(RayView r) const = 0;
  virtual Addr node_at(RayView r, const Ordinal& h) const = 0;
  virtual bool contains(RayView r, AddrView a) const = 0;
  virtual Ordinal meet(RayView r1, RayView r2) const = 0;
  virtual TopSet tops(RayView r) const = 0;
  virtual HighRay downset(AddrView limit) const = 0;
  virtual std::optional<HighRay> least_ray_through(AddrView a) const = 0;
  virtual bool has_rays() const = 0;
  virtual HighRay random_ray(Rng& rng, unsigned budget) const = 0;
};

SpecPtr make_chain(const Ordinal& alpha);
/// branching nullopt = w.
SpecPtr make_inftree(Card branching);
SpecPtr make_fan(std::vector<SpecPtr> children);
/// w-indexed fan; `text` is the template's source form.
SpecPtr make_fan_family(SpecTemplate child, std::string text);
/// `branches` are high-rays of `base`; each receives `mult` tops.
SpecPtr make_withtops(SpecPtr base, std::vector<HighRay> branches, Card mult);
/// `base` must be a WithTops spec; every top gets `copies` scions.
SpecPtr make_graft(SpecPtr base, SpecTemplate scion, std::string text, Card copies);

/// Route a high-ray of a component through `prefix` tokens.
HighRay prefix_ray(const Addr& prefix, HighRay r);

/// OrderTree over a spec: global addresses are the spec's local ones.
class SpecTree : public OrderTree {
 public:
  explicit SpecTree(SpecPtr spec) : spec_(std::move(spec)) {}
  const SpecPtr& spec() const { return spec_; }

  std::string describe() const override { return spec_->to_string(); }
  Addr root() const override { return spec_->root(); }
  void check_addr(const Addr& a) const override { spec_->check_addr(a); }
  Ordinal height(const Addr& a) const override;
  bool le(const Addr& a, const Addr& b) const override;
  Addr ancestor(const Addr& a, const Ordinal& h) const override;
  std::vector<Addr> children(const Addr& a, std::uint64_t lo, std::uint64_t hi) const override;
  Card child_count(const Addr& a) const override;
  std::optional<Ordinal> min_limit_above(const Addr& a) const override;
  Ordinal tree_height() const override { return spec_->tree_height(); }
  std::vector<Addr> enumerate(const TruncBounds& b) const override;

  void check_ray(const HighRay& r) const override { spec_->check_ray({&r, 0}); }
  Ordinal order_type(const HighRay& r) const override;
  Addr node_at(const HighRay& r, const Ordinal& h) const override;
  bool contains(const HighRay& r, const Addr& a) const override;
  Ordinal meet(const HighRay& r1, const HighRay& r2) const override;
  TopSet tops(const HighRay& r) const override;
  HighRay downset(const Addr& limit) const override;
  std::optional<HighRay> least_ray_through(const Addr& a) const override;
  bool has_rays() const override { return spec_->has_rays(); }
  HighRay random_ray(Rng& rng, unsigned budget) const override { return spec_->random_ray(rng, budget); }

 private:
  SpecPtr spec_;
};

}  // namespace endspace
