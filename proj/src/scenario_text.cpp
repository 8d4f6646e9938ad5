#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "aft/error.hpp"
#include "aft/harness.hpp"
#include "text_util.hpp"

namespace aft {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

struct NodeSection {
  int id = 0;
  std::size_t line = 0;
  Section keys;
};

constexpr std::string_view kTopKeys[] = {
    "name",     "seed",     "fault_model", "f",       "n",
    "q",        "mode",     "policy",      "epsilon", "alpha",
    "space",    "kind",     "initial",     "net.base_delay", "net.jitter",
    "net.drop_prob", "request_interval", "workload"};

constexpr std::string_view kNodeKeys[] = {
    "roles", "behavior", "initial", "faults", "transform", "inverse",
    "model", "alpha",    "epsilon", "inverse_epsilon", "inverse_alpha"};

constexpr std::string_view kArtiraKeys[] = {"transform", "inverse",         "model",
                                            "alpha",     "epsilon",         "inverse_epsilon",
                                            "inverse_alpha"};

template <std::size_t N>
bool known(const std::string_view (&keys)[N], std::string_view key) {
  for (auto k : keys) {
    if (k == key) return true;
  }
  return false;
}

std::uint64_t parse_u64(std::string_view text) {
  text = detail::trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || p != end) {
    throw DomainError("expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text) {
  const auto v = parse_integer(text);
  if (v < 0 || v > 1'000'000) throw DomainError("expected a small non-negative integer");
  return static_cast<int>(v);
}

ValueShape parse_shape(std::string_view text) {
  std::string_view name, args;
  if (!detail::split_call(text, name, args)) throw DomainError("malformed kind");
  const auto n = detail::lower(name);
  if (n == "vector") {
    if (args.empty()) throw DomainError("vector kind needs a length, e.g. vector(3)");
    return {ValueKind::Vector, static_cast<std::size_t>(parse_int(args))};
  }
  if (!args.empty()) throw DomainError("kind '" + n + "' takes no arguments");
  if (n == "real") return {ValueKind::Real, 0};
  if (n == "integer") return {ValueKind::Integer, 0};
  if (n == "boolean") return {ValueKind::Boolean, 0};
  if (n == "symbol") return {ValueKind::Symbol, 0};
  throw DomainError("unknown value kind '" + std::string(name) + "'");
}

std::string format_shape(const ValueShape& s) {
  if (s.kind == ValueKind::Vector) return "vector(" + std::to_string(s.vector_length) + ")";
  return std::string(to_string(s.kind));
}

WorkloadSpec parse_workload(std::string_view text, const ValueShape& shape) {
  text = detail::trim(text);
  std::string_view name, args;
  if (detail::split_call(text, name, args) && detail::lower(name) == "generate") {
    const auto argv = detail::split_top_level(args);
    if (argv.size() != 2 && argv.size() != 4) {
      throw DomainError("generate takes (pattern, count) or (pattern, count, lo, hi)");
    }
    WorkloadGenerator g;
    const auto p = detail::lower(argv[0]);
    if (p == "writes") {
      g.pattern = WorkloadGenerator::Pattern::Writes;
    } else if (p == "reads") {
      g.pattern = WorkloadGenerator::Pattern::Reads;
    } else if (p == "mixed") {
      g.pattern = WorkloadGenerator::Pattern::Mixed;
    } else {
      throw DomainError("unknown workload pattern '" + std::string(argv[0]) + "'");
    }
    g.count = parse_u64(argv[1]);
    if (argv.size() == 4) {
      g.lo = parse_real(argv[2]);
      g.hi = parse_real(argv[3]);
    }
    return g;
  }
  std::vector<WorkloadOp> ops;
  if (text.empty()) return ops;
  for (auto item : detail::split_top_level(text)) {
    if (!detail::split_call(item, name, args)) {
      throw DomainError("malformed workload item '" + std::string(item) + "'");
    }
    const auto n = detail::lower(name);
    if (n == "read" && args.empty()) {
      ops.push_back(WorkloadOp::read());
    } else if (n == "write" && !args.empty()) {
      ops.push_back(WorkloadOp::write(parse_value(args, shape)));
    } else {
      throw DomainError("workload items are write(<value>) or read, got '" + std::string(item) +
                        "'");
    }
  }
  return ops;
}

std::string format_workload(const WorkloadSpec& w) {
  if (const auto* g = std::get_if<WorkloadGenerator>(&w)) {
    const char* p = g->pattern == WorkloadGenerator::Pattern::Writes  ? "writes"
                    : g->pattern == WorkloadGenerator::Pattern::Reads ? "reads"
                                                                      : "mixed";
    return std::string("generate(") + p + ", " + std::to_string(g->count) + ", " +
           format_real(g->lo) + ", " + format_real(g->hi) + ")";
  }
  std::string out;
  for (const auto& op : std::get<std::vector<WorkloadOp>>(w)) {
    if (!out.empty()) out += ", ";
    out += op.kind == WorkloadOp::Kind::Read ? "read" : "write(" + format_value(op.value) + ")";
  }
  return out;
}

std::vector<FaultEvent> parse_faults(std::string_view text) {
  std::vector<FaultEvent> out;
  text = detail::trim(text);
  if (text.empty() || detail::lower(text) == "none") return out;
  for (auto item : detail::split_top_level(text)) out.push_back(parse_fault(item));
  return out;
}

// Value in an artira's own storage domain: numeric unless the transform is
// the identity.
Value parse_node_initial(std::string_view text, const ValueShape& shape, bool raw_numeric) {
  if (!raw_numeric || shape.kind == ValueKind::Real || shape.kind == ValueKind::Integer) {
    return parse_value(text, shape);
  }
  return Value::real(parse_real(text));
}

class Reader {
 public:
  explicit Reader(std::string_view text) { scan(text); }

  ScenarioSource build() {
    ScenarioSource src;
    auto& s = src.scenario;
    // The value kind decides how every value is read, so it goes first.
    with(top_, "kind", [&](std::string_view v) { s.shape = parse_shape(v); });
    if (s.shape.kind == ValueKind::Vector) s.space = MetricSpace::EuclideanVector;
    if (s.shape.kind == ValueKind::Boolean || s.shape.kind == ValueKind::Symbol) {
      s.space = MetricSpace::Discrete01;
    }
    s.initial = default_initial(s.shape);

    with(top_, "name", [&](std::string_view v) { s.name = std::string(v); });
    with(top_, "seed", [&](std::string_view v) {
      s.seed = parse_u64(v);
      src.has_seed = true;
    });
    with(top_, "fault_model", [&](std::string_view v) { s.fault_model = parse_fault_model(v); });
    with(top_, "f", [&](std::string_view v) { s.f = parse_int(v); });
    with(top_, "n", [&](std::string_view v) { s.n = parse_int(v); });
    with(top_, "q", [&](std::string_view v) { s.q = parse_int(v); });
    with(top_, "mode", [&](std::string_view v) { s.mode = parse_protocol_mode(v); });
    with(top_, "policy", [&](std::string_view v) { s.policy = parse_policy(v); });
    with(top_, "epsilon", [&](std::string_view v) { s.epsilon = parse_real(v); });
    with(top_, "alpha", [&](std::string_view v) { s.alpha = parse_real(v); });
    with(top_, "space", [&](std::string_view v) { s.space = parse_metric_space(v); });
    with(top_, "initial", [&](std::string_view v) { s.initial = parse_value(v, s.shape); });
    with(top_, "net.base_delay", [&](std::string_view v) { s.net.base_delay = parse_u64(v); });
    with(top_, "net.jitter", [&](std::string_view v) { s.net.jitter = parse_u64(v); });
    with(top_, "net.drop_prob", [&](std::string_view v) { s.net.drop_prob = parse_real(v); });
    with(top_, "request_interval", [&](std::string_view v) { s.request_interval = parse_u64(v); });
    with(top_, "workload", [&](std::string_view v) { s.workload = parse_workload(v, s.shape); });

    for (auto& sec : nodes_) s.nodes.push_back(build_node(sec, s.shape));
    validate(s);
    return src;
  }

 private:
  static Value default_initial(const ValueShape& shape) {
    switch (shape.kind) {
      case ValueKind::Integer: return Value::integer(0);
      case ValueKind::Boolean: return Value::boolean(false);
      case ValueKind::Vector: return Value::vector(std::vector<double>(shape.vector_length, 0.0));
      case ValueKind::Symbol: return Value::symbol("0");
      default: return Value::real(0.0);
    }
  }

  NodeSpec build_node(NodeSection& sec, const ValueShape& shape) {
    NodeSpec node;
    node.node_id = sec.id;
    auto& k = sec.keys;
    with(k, "roles", [&](std::string_view v) { node.roles = parse_roles(v); });
    with(k, "faults", [&](std::string_view v) { node.faults = parse_faults(v); });

    bool artira = false;
    for (auto key : kArtiraKeys) artira = artira || k.count(key);
    if (auto it = k.find("behavior"); it != k.end()) {
      const auto b = detail::lower(detail::trim(it->second.value));
      if (b == "artira") {
        artira = true;
      } else if (b == "replica") {
        for (auto key : kArtiraKeys) {
          if (auto a = k.find(key); a != k.end()) {
            throw ParseError(a->second.line, a->second.key_column,
                             "'" + std::string(key) + "' applies only to artira nodes");
          }
        }
      } else {
        throw ParseError(it->second.line, it->second.value_column,
                         "behavior must be replica or artira");
      }
    }

    bool raw_numeric = false;
    if (artira) {
      ArtiraSpec a;
      auto& t = a.triple;
      with(k, "transform", [&](std::string_view v) { t.transform = parse_transform(v); });
      with(k, "alpha", [&](std::string_view v) { t.alpha = parse_real(v); });
      with(k, "epsilon", [&](std::string_view v) { t.epsilon = parse_real(v); });
      t.inverse = default_inverse(t.transform);
      with(k, "inverse", [&](std::string_view v) {
        if (detail::lower(detail::trim(v)) == "none") {
          t.inverse.reset();
        } else {
          t.inverse = parse_transform(v);
        }
      });
      t.model = classify(t.alpha, t.epsilon);
      with(k, "model", [&](std::string_view v) { t.model = parse_replication_model(v); });
      with(k, "inverse_epsilon", [&](std::string_view v) { a.inverse_epsilon = parse_real(v); });
      with(k, "inverse_alpha", [&](std::string_view v) { a.inverse_alpha = parse_real(v); });
      raw_numeric = !std::holds_alternative<transform::Identity>(t.transform);
      node.artira = std::move(a);
    }
    with(k, "initial", [&](std::string_view v) {
      node.initial = parse_node_initial(v, shape, raw_numeric);
    });
    return node;
  }

  template <class Fn>
  void with(const Section& sec, std::string_view key, Fn&& fn) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    try {
      fn(std::string_view(it->second.value));
    } catch (const DomainError& e) {
      throw ParseError(it->second.line, it->second.value_column, e.what());
    }
  }

  void scan(std::string_view text) {
    Section* current = &top_;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      std::string_view line = text.substr(start, nl == text.npos ? text.npos : nl - start);
      start = nl == text.npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
      if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
      if (detail::trim(line).empty()) continue;

      const auto lead = line.find_first_not_of(" \t") + 1;
      const auto body = detail::trim(line);
      if (body.front() == '[') {
        current = section(body, line_no, lead);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == line.npos) throw ParseError(line_no, lead, "expected 'key = value'");
      const auto key = detail::trim(line.substr(0, eq));
      if (key.empty()) throw ParseError(line_no, lead, "missing key before '='");
      const bool ok = current == &top_ ? known(kTopKeys, key) : known(kNodeKeys, key);
      if (!ok) {
        throw ParseError(line_no, lead,
                         "unknown key '" + std::string(key) + "'" +
                             (current == &top_ ? "" : " in node section"));
      }
      if (current->count(key)) {
        throw ParseError(line_no, lead, "duplicate key '" + std::string(key) + "'");
      }
      const auto rest = line.substr(eq + 1);
      const auto value = detail::trim(rest);
      const auto vcol = eq + 2 + (value.empty() ? 0 : rest.find_first_not_of(" \t"));
      current->emplace(std::string(key), Entry{std::string(value), line_no, lead, vcol});
    }
  }

  Section* section(std::string_view body, std::size_t line_no, std::size_t col) {
    if (body.back() != ']') throw ParseError(line_no, col, "unterminated section header");
    const auto name = detail::trim(body.substr(1, body.size() - 2));
    constexpr std::string_view prefix = "node.";
    if (name.substr(0, prefix.size()) != prefix) {
      throw ParseError(line_no, col, "unknown section '" + std::string(name) + "'");
    }
    int id = 0;
    try {
      id = parse_int(name.substr(prefix.size()));
    } catch (const DomainError&) {
      throw ParseError(line_no, col + 1 + prefix.size(), "node id must be a non-negative integer");
    }
    for (const auto& n : nodes_) {
      if (n.id == id) {
        throw ParseError(line_no, col, "duplicate section for node " + std::to_string(id));
      }
    }
    nodes_.push_back({id, line_no, {}});
    return &nodes_.back().keys;
  }

  Section top_;
  std::vector<NodeSection> nodes_;  // file order; ids are checked by validation
};

}  // namespace

std::string format_roles(RoleSet roles) {
  std::string out;
  auto add = [&](Role r, const char* name) {
    if (!roles.has(r)) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(Role::Proposer, "proposer");
  add(Role::Acceptor, "acceptor");
  add(Role::Learner, "learner");
  return out.empty() ? "none" : out;
}

RoleSet parse_roles(std::string_view text) {
  RoleSet roles{0};
  for (auto piece : detail::split_top_level(text)) {
    const auto r = detail::lower(piece);
    if (r == "all") {
      roles.bits |= 7u;
    } else if (r == "proposer") {
      roles.bits |= static_cast<unsigned>(Role::Proposer);
    } else if (r == "acceptor") {
      roles.bits |= static_cast<unsigned>(Role::Acceptor);
    } else if (r == "learner") {
      roles.bits |= static_cast<unsigned>(Role::Learner);
    } else {
      throw DomainError("unknown role '" + std::string(piece) + "'");
    }
  }
  if (roles.bits == 0) throw DomainError("a node needs at least one role");
  return roles;
}

ScenarioSource read_scenario(std::string_view text) { return Reader(text).build(); }

Scenario parse_scenario(std::string_view text) { return read_scenario(text).scenario; }

ScenarioSource load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream out;
  auto kv = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  kv("name", s.name);
  kv("seed", std::to_string(s.seed));
  kv("fault_model", std::string(to_string(s.fault_model)));
  kv("f", std::to_string(s.f));
  if (s.n) kv("n", std::to_string(*s.n));
  if (s.q) kv("q", std::to_string(*s.q));
  kv("mode", std::string(to_string(s.mode)));
  kv("policy", format_policy(s.policy));
  kv("epsilon", format_real(s.epsilon));
  kv("alpha", format_real(s.alpha));
  kv("kind", format_shape(s.shape));
  kv("space", std::string(to_string(s.space)));
  kv("initial", format_value(s.initial));
  kv("net.base_delay", std::to_string(s.net.base_delay));
  kv("net.jitter", std::to_string(s.net.jitter));
  kv("net.drop_prob", format_real(s.net.drop_prob));
  if (s.request_interval) kv("request_interval", std::to_string(*s.request_interval));
  kv("workload", format_workload(s.workload));

  for (const auto& node : s.nodes) {
    out << "\n[node." << node.node_id << "]\n";
    kv("roles", format_roles(node.roles));
    kv("behavior", node.artira ? "artira" : "replica");
    if (node.initial) kv("initial", format_value(*node.initial));
    if (!node.faults.empty()) {
      std::string faults;
      for (const auto& f : node.faults) faults += (faults.empty() ? "" : ", ") + format_fault(f);
      kv("faults", faults);
    }
    if (const auto& a = node.artira) {
      kv("transform", format_transform(a->triple.transform));
      kv("inverse", a->triple.inverse ? format_transform(*a->triple.inverse) : "none");
      kv("model", std::string(to_string(a->triple.model)));
      kv("alpha", format_real(a->triple.alpha));
      kv("epsilon", format_real(a->triple.epsilon));
      kv("inverse_epsilon", format_real(a->inverse_epsilon));
      kv("inverse_alpha", format_real(a->inverse_alpha));
    }
  }
  return out.str();
}

}  // namespace aft
