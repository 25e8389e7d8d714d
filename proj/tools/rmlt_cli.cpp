#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rmlt/rmlt.hpp"
#include "rmlt/serialize.hpp"

using namespace rmlt;

namespace {

struct Common {
  unsigned q = 0, p = 0, s = 0;
  std::size_t n = 0;
  std::uint64_t d = 0;
  bool has_d = false;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  std::uint64_t budget = 0;  // 0: per-command default
  unsigned workers = 0;
  std::string out;
  std::string format = "json";
};

Field field_from_flags(const Common& c) {
  if (c.q != 0) {
    Field f = Field::of_order(c.q);
    if ((c.p != 0 && c.p != f.p()) || (c.s != 0 && c.s != f.s()))
      throw Error(ErrorCode::OutOfRange, "--q disagrees with --p/--s");
    return f;
  }
  if (c.p != 0) return Field::create(c.p, c.s == 0 ? 1 : c.s);
  throw Error(ErrorCode::OutOfRange, "a field is required: pass --q or --p [--s]");
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << "\t" << j.dump() << "\n";
  }
}

void emit(const json& j, const Common& c, std::ostream& os = std::cout) {
  if (c.format == "table")
    flatten(j, "", os);
  else
    os << j.dump(2) << "\n";
}

void write_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  f << j.dump(2) << "\n";
}

json read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

/// Accepts a bare constraint or a build output {constraint, provenance}.
Constraint load_constraint(const std::string& path) {
  json j = read_file(path);
  if (j.contains("constraint")) j = j["constraint"];
  return constraint_from_json(j);
}

std::vector<unsigned> parse_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<unsigned>(std::stoul(item)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad integer '" + item + "'");
    }
  }
  return out;
}

FunctionTable random_codeword(const Field& f, std::size_t n, std::uint64_t d, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> coef(0, f.q() - 1);
  std::vector<MultiPoly::Term> terms;
  for (const auto& dv : degree_set(n, d, f.q())) terms.push_back({dv, static_cast<Element>(coef(rng))});
  return FunctionTable::from_poly(MultiPoly::from_terms(f, n, std::move(terms)));
}

/// Generators: random-codeword, noise:RATE, random, monomial:E1,E2,..,
/// file:PATH, table:V0,V1,...
FunctionTable make_function(const std::string& generator, const Field& f, std::size_t n, const Common& c) {
  std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto colon = generator.find(':');
  const std::string kind = generator.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : generator.substr(colon + 1);
  auto need_d = [&] {
    if (!c.has_d) throw Error(ErrorCode::OutOfRange, "generator '" + kind + "' needs --d");
  };
  if (kind == "random-codeword") {
    need_d();
    return random_codeword(f, n, c.d, rng);
  }
  if (kind == "noise") {
    need_d();
    const double rate = arg.empty() ? 0.1 : std::stod(arg);
    FunctionTable base = random_codeword(f, n, c.d, rng);
    std::vector<Element> v = base.values();
    std::bernoulli_distribution flip(rate);
    std::uniform_int_distribution<unsigned> other(1, f.q() - 1);
    for (auto& x : v)
      if (flip(rng)) x = f.add(x, static_cast<Element>(other(rng)));
    return FunctionTable(f, n, std::move(v));
  }
  if (kind == "random") {
    std::uniform_int_distribution<unsigned> val(0, f.q() - 1);
    std::vector<Element> v(checked_power(f.q(), n, std::uint64_t{1} << 26, "table size"));
    for (auto& x : v) x = static_cast<Element>(val(rng));
    return FunctionTable(f, n, std::move(v));
  }
  if (kind == "monomial") {
    std::vector<unsigned> e = parse_list(arg);
    if (e.size() != n) throw Error(ErrorCode::ArityMismatch, "monomial needs " + std::to_string(n) + " exponents");
    for (auto x : e)
      if (x >= f.q()) throw Error(ErrorCode::OutOfRange, "exponents must be <= q-1");
    return FunctionTable::monomial(f, e);
  }
  if (kind == "file") {
    FunctionTable t = table_from_json(read_file(arg));
    if (t.field() != f || t.n() != n) throw Error(ErrorCode::DomainMismatch, "function file domain differs");
    return t;
  }
  if (kind == "table") {
    std::vector<Element> v;
    for (auto x : parse_list(arg)) v.push_back(static_cast<Element>(x));
    return FunctionTable(f, n, std::move(v));
  }
  throw Error(ErrorCode::ParseError, "unknown function generator '" + kind + "'");
}

int cmd_core(const Common& c) {
  const Field f = field_from_flags(c);
  CoreOptions opts;
  opts.workers = c.workers;
  if (c.budget) opts.budget = c.budget;
  const CoreReport rep = verify_core(f, opts);
  json j = to_json(rep);
  j["seed"] = c.seed;
  emit(j, c);
  if (!c.out.empty()) write_file(c.out, j);
  return rep.pass ? 0 : 1;
}

int cmd_build(const Common& c) {
  if (!c.has_d) throw Error(ErrorCode::OutOfRange, "build needs --d");
  const Field f = field_from_flags(c);
  const std::size_t n = c.n != 0 ? c.n : arity_required(c.d, f.q(), f.p(), f.s());
  BuildOptions opts;
  opts.core.workers = c.workers;
  if (c.budget) opts.core.budget = c.budget;
  const RmBuild b = build_rm(n, c.d, f, opts);
  json prov = provenance_json(b);
  prov["seed"] = c.seed;
  if (!c.out.empty()) write_file(c.out, {{"constraint", to_json(b.constraint)}, {"provenance", prov}});
  emit(prov, c);
  bool ok = b.bound_satisfied && b.simple_bound_satisfied;
  for (const auto& p : b.parts) ok &= p.bound_satisfied;
  return ok ? 0 : 1;
}

int cmd_verify(const Common& c, const std::string& file, const std::string& mode) {
  if (!c.has_d) throw Error(ErrorCode::OutOfRange, "verify needs --d");
  const Constraint con = load_constraint(file);
  const unsigned q = con.field().q();
  const std::size_t n = con.n();
  if ((c.q && c.q != q) || (c.n && c.n != n))
    throw Error(ErrorCode::DomainMismatch, "constraint file lives on F_" + std::to_string(q) + "^" + std::to_string(n));
  OracleOptions opts;
  opts.seed = c.seed;
  if (c.budget) opts.transform_budget = c.budget;
  json j = {{"seed", c.seed}};
  bool ok = true;
  if (mode == "border" || mode == "both") {
    const DegBorderReport rep = verify_deg_border(con, n, c.d, q, opts);
    j["border"] = to_json(rep);
    ok &= rep.pass;
  }
  if (mode == "rank" || mode == "both") {
    const RankCertificate cert = orbit_span_rank(con, n, c.d, q, opts);
    j["rank"] = to_json(cert);
    ok &= cert.pass;
  }
  j["pass"] = ok;
  emit(j, c);
  if (!c.out.empty()) write_file(c.out, j);
  return ok ? 0 : 1;
}

int cmd_test(const Common& c, const std::string& file, const std::string& generator, bool exact) {
  const Constraint con = load_constraint(file);
  const Field& f = con.field();
  const FunctionTable fn = make_function(generator, f, con.n(), c);
  TestReport rep = exact ? exact_rejection(con, fn, c.budget ? c.budget : kDefaultTransformBudget, c.workers)
                         : estimate_rejection(con, fn, c.trials, c.seed, c.workers);
  rep.seed = c.seed;
  json j = to_json(rep);
  j["function"] = generator;
  bool ok = true;
  if (c.has_d) {
    const Fraction delta = distance_to_rm(fn, con.n(), c.d, f.q());
    j["delta"] = {{"num", delta.num}, {"den", delta.den}, {"value", delta.value()}};
    if (delta.num > 0) j["epsilon_hat"] = rep.estimate / delta.value();
    // completeness: codewords are never rejected
    if (delta.num == 0) ok = rep.rejections == 0;
  }
  if (generator == "random-codeword") ok &= rep.rejections == 0;
  j["pass"] = ok;
  emit(j, c);
  if (!c.out.empty()) write_file(c.out, j);
  return ok ? 0 : 1;
}

int cmd_grid(const Common& c, const std::string& qs, std::uint64_t dmax, bool verify) {
  const std::vector<unsigned> qlist = parse_list(qs);
  if (qlist.empty()) throw Error(ErrorCode::ParseError, "grid needs a non-empty --qs list");
  json rows = json::array();
  bool ok = true;
  for (unsigned q : qlist) {
    for (std::uint64_t d = 0; d <= dmax; ++d) {
      json row = {{"q", q}, {"d", d}};
      try {
        const Field f = Field::of_order(q);
        const std::size_t n = std::max(c.n, arity_required(d, q, f.p(), f.s()));
        BuildOptions opts;
        opts.core.workers = c.workers;
        const RmBuild b = build_rm(n, d, f, opts);
        json parts = json::array();
        bool parts_ok = true;
        for (const auto& p : b.parts) {
          parts.push_back({{"target", p.decomposition.target}, {"k", p.k}, {"bound_satisfied", p.bound_satisfied}});
          parts_ok &= p.bound_satisfied;
        }
        row["n"] = n;
        row["k"] = b.k;
        row["degree_parts"] = parts;
        row["bound"] = b.bound;
        row["simple_bound"] = b.simple_bound;
        row["bound_satisfied"] = b.bound_satisfied && b.simple_bound_satisfied && parts_ok;
        if (q == 2) row["reference_k"] = std::uint64_t{1} << (d + 1);
        ok &= row["bound_satisfied"].get<bool>();
        if (verify) {
          OracleOptions oo;
          oo.seed = c.seed;
          if (c.budget) oo.transform_budget = c.budget;
          const DegBorderReport rep = verify_deg_border(b.constraint, n, d, q, oo);
          row["verified"] = rep.pass;
          ok &= rep.pass;
        }
      } catch (const Error& e) {
        row["error"] = std::string(to_string(e.code())) + ": " + e.what();
        ok = false;
      }
      rows.push_back(row);
    }
  }
  json j = {{"seed", c.seed}, {"rows", rows}, {"pass", ok}};
  if (c.format == "csv") {
    std::cout << "q,d,n,k,bound,simple_bound,bound_satisfied,reference_k,verified,error\n";
    for (const auto& r : rows) {
      auto get = [&](const char* key) { return r.contains(key) ? r[key].dump() : std::string(); };
      std::cout << get("q") << "," << get("d") << "," << get("n") << "," << get("k") << "," << get("bound") << ","
                << get("simple_bound") << "," << get("bound_satisfied") << "," << get("reference_k") << ","
                << get("verified") << "," << get("error") << "\n";
    }
  } else {
    emit(j, c);
  }
  if (!c.out.empty()) write_file(c.out, j);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse single-orbit constraints and local tests for generalized Reed-Muller codes"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", c.q, "field order");
    sub->add_option("--p", c.p, "characteristic");
    sub->add_option("--s", c.s, "extension degree");
    sub->add_option("--n", c.n, "number of variables");
    sub->add_option("--d", c.d, "degree")->each([&](const std::string&) { c.has_d = true; });
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--trials", c.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--budget", c.budget, "enumeration budget")->check(CLI::PositiveNumber);
    sub->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    sub->add_option("--out", c.out, "output file");
    sub->add_option("--format", c.format, "json | table (grid also: csv)")
        ->check(CLI::IsMember({"json", "table", "csv"}));
  };

  auto* core = app.add_subcommand("core", "build and verify the p-variate core constraint");
  add_common(core);

  auto* build = app.add_subcommand("build", "build the RM[n,d,q] constraint");
  add_common(build);

  std::string constraint_file, mode = "both", function_arg;
  bool exact = false;
  auto* verify = app.add_subcommand("verify", "Deg/Border check and orbit-span rank of a constraint file");
  add_common(verify);
  verify->add_option("--constraint", constraint_file, "constraint JSON")->required();
  verify->add_option("--mode", mode, "border | rank | both")->check(CLI::IsMember({"border", "rank", "both"}));

  auto* test = app.add_subcommand("test", "run the local tester on a function");
  add_common(test);
  test->add_option("--constraint", constraint_file, "constraint JSON")->required();
  test->add_option("--function", function_arg,
                   "random-codeword | noise:RATE | random | monomial:E1,E2 | file:PATH | table:V0,V1,...")
      ->required();
  test->add_flag("--exact", exact, "enumerate every affine map");

  std::string qs;
  std::uint64_t dmax = 7;
  bool grid_verify = false;
  auto* grid = app.add_subcommand("grid", "bound sweep over q and d");
  add_common(grid);
  grid->add_option("--qs", qs, "comma-separated field orders")->required();
  grid->add_option("--dmax", dmax, "largest degree");
  grid->add_flag("--verify", grid_verify, "also run the Deg/Border check");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*core) return cmd_core(c);
    if (*build) return cmd_build(c);
    if (*verify) return cmd_verify(c, constraint_file, mode);
    if (*test) return cmd_test(c, constraint_file, function_arg, exact);
    if (*grid) return cmd_grid(c, qs, dmax, grid_verify);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
