#include "aft/transform.hpp"

#include <cmath>
#include <limits>

#include "aft/error.hpp"
#include "aft/random.hpp"
#include "text_util.hpp"

namespace aft {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

double numeric_input(const Value& v, std::string_view what) {
  if (!v.is_numeric()) {
    throw KindMismatch(std::string(what) + " needs a numeric input, got " +
                       std::string(to_string(v.kind())));
  }
  return v.numeric();
}

// x + e where |e| <= bound also holds after rounding.
double offset_within(double x, double e, double bound) {
  double y = x + e;
  const double toward = e >= 0 ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
  while (std::fabs(y - x) > bound) y = std::nextafter(y, toward);
  return y;
}

double draw(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
  return random::unit(random::hash({random::kAdapterStream, seed, index, lane}));
}

}  // namespace

Value apply_transform(const TransformSpec& spec, const Value& input, std::uint64_t draw_index) {
  return std::visit(
      overloaded{
          [&](const transform::Identity&) { return input; },
          [&](const transform::Affine& a) {
            return Value::real(a.scale * numeric_input(input, "affine") + a.offset);
          },
          [&](const transform::AffineInverse& a) {
            const double x = numeric_input(input, "affine_inverse");
            return Value::real(x / a.scale - a.offset / a.scale);
          },
          [&](const transform::Negate&) {
            if (input.kind() == ValueKind::Integer) return Value::integer(-input.as_integer());
            return Value::real(-numeric_input(input, "negate"));
          },
          [&](const transform::Reciprocal&) {
            const double x = numeric_input(input, "reciprocal");
            if (x == 0.0) throw DomainError("reciprocal of zero");
            return Value::real(1.0 / x);
          },
          [&](const transform::BoundedNoise& n) {
            const double x = numeric_input(input, "bounded_noise");
            const double e = n.delta * (2.0 * draw(n.seed, draw_index, 0) - 1.0);
            return Value::real(offset_within(x, e, n.delta));
          },
          [&](const transform::StochasticPredictor& p) {
            const double x = numeric_input(input, "stochastic");
            if (draw(p.seed, draw_index, 0) < p.hit_prob) {
              const double e = p.error_scale * (2.0 * draw(p.seed, draw_index, 1) - 1.0);
              return Value::real(offset_within(x, e, p.error_scale));
            }
            // Miss: magnitude error_scale * (1 + Exp(1)), random sign.
            const double tail = -std::log1p(-draw(p.seed, draw_index, 2));
            const double sign = draw(p.seed, draw_index, 1) < 0.5 ? -1.0 : 1.0;
            return Value::real(x + sign * p.error_scale * (1.0 + tail));
          },
      },
      spec);
}

bool is_stochastic(const TransformSpec& spec) {
  return std::holds_alternative<transform::BoundedNoise>(spec) ||
         std::holds_alternative<transform::StochasticPredictor>(spec);
}

std::optional<TransformSpec> default_inverse(const TransformSpec& spec) {
  return std::visit(
      overloaded{
          [](const transform::Identity&) -> std::optional<TransformSpec> {
            return transform::Identity{};
          },
          [](const transform::Affine& a) -> std::optional<TransformSpec> {
            return transform::AffineInverse{a.scale, a.offset};
          },
          [](const transform::AffineInverse& a) -> std::optional<TransformSpec> {
            return transform::Affine{a.scale, a.offset};
          },
          [](const transform::Negate&) -> std::optional<TransformSpec> {
            return transform::Negate{};
          },
          [](const transform::Reciprocal&) -> std::optional<TransformSpec> {
            return transform::Reciprocal{};
          },
          [](const transform::BoundedNoise&) -> std::optional<TransformSpec> {
            return transform::Identity{};
          },
          [](const transform::StochasticPredictor&) -> std::optional<TransformSpec> {
            return std::nullopt;
          },
      },
      spec);
}

bool is_perfect_inverse(const TransformSpec& spec, const TransformSpec& inverse) {
  if (is_stochastic(spec)) return false;
  const auto expected = default_inverse(spec);
  return expected && *expected == inverse;
}

std::vector<std::string> transform_violations(const TransformSpec& spec) {
  std::vector<std::string> out;
  std::visit(overloaded{
                 [&](const transform::Affine& a) {
                   if (a.scale == 0.0 || !std::isfinite(a.scale))
                     out.emplace_back("affine scale must be finite and non-zero");
                   if (!std::isfinite(a.offset)) out.emplace_back("affine offset must be finite");
                 },
                 [&](const transform::AffineInverse& a) {
                   if (a.scale == 0.0 || !std::isfinite(a.scale))
                     out.emplace_back("affine_inverse scale must be finite and non-zero");
                   if (!std::isfinite(a.offset))
                     out.emplace_back("affine_inverse offset must be finite");
                 },
                 [&](const transform::BoundedNoise& n) {
                   if (!(n.delta >= 0.0) || !std::isfinite(n.delta))
                     out.emplace_back("bounded_noise delta must be finite and >= 0");
                 },
                 [&](const transform::StochasticPredictor& p) {
                   if (!(p.error_scale >= 0.0) || !std::isfinite(p.error_scale))
                     out.emplace_back("stochastic error_scale must be finite and >= 0");
                   if (!(p.hit_prob >= 0.0 && p.hit_prob <= 1.0))
                     out.emplace_back("stochastic hit_prob must lie in [0, 1]");
                 },
                 [](const auto&) {},
             },
             spec);
  return out;
}

std::string format_transform(const TransformSpec& spec) {
  return std::visit(
      overloaded{
          [](const transform::Identity&) -> std::string { return "identity"; },
          [](const transform::Affine& a) -> std::string {
            return "affine(" + format_real(a.scale) + ", " + format_real(a.offset) + ")";
          },
          [](const transform::AffineInverse& a) -> std::string {
            return "affine_inverse(" + format_real(a.scale) + ", " + format_real(a.offset) + ")";
          },
          [](const transform::Negate&) -> std::string { return "negate"; },
          [](const transform::Reciprocal&) -> std::string { return "reciprocal"; },
          [](const transform::BoundedNoise& n) -> std::string {
            return "bounded_noise(" + format_real(n.delta) + ", " + std::to_string(n.seed) + ")";
          },
          [](const transform::StochasticPredictor& p) -> std::string {
            return "stochastic(" + format_real(p.error_scale) + ", " + format_real(p.hit_prob) +
                   ", " + std::to_string(p.seed) + ")";
          },
      },
      spec);
}

namespace {

// Accepts plain decimals and simple ratios such as 5/9.
double parse_argument(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_real(text);
  return parse_real(text.substr(0, slash)) / parse_real(text.substr(slash + 1));
}

std::uint64_t parse_seed(std::string_view text) {
  const auto v = parse_integer(text);
  if (v < 0) throw DomainError("seed must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

TransformSpec parse_transform(std::string_view text) {
  std::string_view name, args;
  if (!detail::split_call(text, name, args)) {
    throw DomainError("malformed transform '" + std::string(text) + "'");
  }
  const auto kind = detail::lower(name);
  std::vector<std::string_view> argv;
  if (!args.empty()) argv = detail::split_top_level(args);
  auto expect = [&](std::size_t n) {
    if (argv.size() != n) {
      throw DomainError(kind + " takes " + std::to_string(n) + " argument(s), got " +
                        std::to_string(argv.size()));
    }
  };

  if (kind == "identity") {
    expect(0);
    return transform::Identity{};
  }
  if (kind == "affine") {
    expect(2);
    return transform::Affine{parse_argument(argv[0]), parse_argument(argv[1])};
  }
  if (kind == "affine_inverse") {
    expect(2);
    return transform::AffineInverse{parse_argument(argv[0]), parse_argument(argv[1])};
  }
  if (kind == "negate") {
    expect(0);
    return transform::Negate{};
  }
  if (kind == "reciprocal") {
    expect(0);
    return transform::Reciprocal{};
  }
  if (kind == "bounded_noise") {
    expect(2);
    return transform::BoundedNoise{parse_argument(argv[0]), parse_seed(argv[1])};
  }
  if (kind == "stochastic" || kind == "stochastic_predictor") {
    expect(3);
    return transform::StochasticPredictor{parse_argument(argv[0]), parse_argument(argv[1]),
                                          parse_seed(argv[2])};
  }
  throw DomainError("unknown transform '" + std::string(name) + "'");
}

}  // namespace aft
