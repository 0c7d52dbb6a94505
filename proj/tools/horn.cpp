// Command-line driver: family enumeration, violation scans, interpolation,
// partially specified spectra, witness synthesis and reduction, hive
// certificates, and a set of worked examples with known outcomes.
//
// Exit codes: 0 success / feasible / no violations, 1 violations or a failed
// check, 2 usage errors or malformed input, 3 a configured resource cap.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <horn/json_io.hpp>
#include <horn/lr.hpp>

namespace {

using namespace horn;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

// Bad flags and malformed input exit 2 so scripts can tell them apart from an
// honest negative verdict, which exits 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  int threads = 1;
  std::uint64_t seed = 0;
};

json make_report(const char* command, const GlobalOpts& g) {
  return json{{"schema", std::string("horn/") + command + "/v1"},
              {"generator", std::string("horn ") + kVersion},
              {"config", json{{"threads", g.threads}, {"seed", g.seed}}}};
}

std::vector<std::string> split(const std::string& csv, char sep = ',') {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(csv);
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

double parse_entry(const std::string& tok) {
  if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot parse number '" + tok + "'");
  }
}

Spectrum parse_spectrum(const std::string& csv) {
  Spectrum s;
  for (const auto& tok : split(csv)) s.push_back(parse_entry(tok));
  if (s.empty()) throw UsageError("empty spectrum '" + csv + "'");
  return s;
}

// An empty string parses to the empty list, so "--I ''" names the empty set.
std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (const auto& tok : split(csv)) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("cannot parse integer '" + tok + "'");
    }
  }
  return out;
}

json load_instance(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in '" + path + "': " + std::string(e.what()));
  }
}

// Shape errors inside an instance file are usage errors, not verdicts.
template <typename F>
auto parse_instance(F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad instance: ") + e.what());
  }
}

template <typename F>
Spectrum sequence(int K, F f) {
  Spectrum s(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i) s[static_cast<std::size_t>(i - 1)] = f(i);
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// triples

struct TriplesOpts {
  std::string kind = "T";
  int m = 2;
  int N = 1;
  int r = -1;
  bool as_json = false;
  bool count_only = false;
};

int run_triples(const GlobalOpts& g, const TriplesOpts& o) {
  HornSetKind kind;
  try {
    kind = kind_from_name(o.kind);
  } catch (const std::exception&) {
    throw UsageError("unknown family kind '" + o.kind + "' (expected T, Tbar, or Tdot)");
  }
  if (o.m < 1) throw UsageError("--m must be at least 1");
  if (o.N < 1) throw UsageError("--N must be at least 1");
  if (o.r > o.N) throw UsageError("--r cannot exceed --N");
  HornCatalog cat(o.m);
  std::vector<int> rs;
  if (o.r >= 0)
    rs.push_back(o.r);
  else
    for (int r = 0; r <= o.N; ++r) rs.push_back(r);

  if (o.count_only) {
    std::cout << "N,r,kind,count\n";
    for (int r : rs)
      std::cout << o.N << ',' << r << ',' << kind_name(kind) << ','
                << cat.cell(kind, o.N, r).size() << '\n';
    return kExitOk;
  }
  if (o.as_json) {
    json rep = make_report("triples", g);
    rep["kind"] = kind_name(kind);
    rep["m"] = o.m;
    rep["N"] = o.N;
    json cells = json::array();
    for (int r : rs) {
      const auto& cell = cat.cell(kind, o.N, r);
      json tuples = json::array();
      for (const auto& t : cell) tuples.push_back(tuple_to_json(t));
      cells.push_back(json{{"r", r}, {"count", cell.size()}, {"tuples", std::move(tuples)}});
    }
    rep["cells"] = std::move(cells);
    std::cout << rep.dump(2) << '\n';
    return kExitOk;
  }
  for (int r : rs)
    for (const auto& t : cat.cell(kind, o.N, r)) std::cout << to_string(t) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckOpts {
  std::string mode = "finite";
  std::string input;
  int N = -1;
  int q_cap = -1;
  double tol = 1e-9;
  bool as_json = false;
};

int run_check(const GlobalOpts& g, const CheckOpts& o) {
  json j = load_instance(o.input);
  ScanOptions opts{o.tol, g.threads};
  std::vector<InequalityRecord> violations;

  if (o.mode == "finite") {
    auto [alpha, betas, N] = parse_instance([&] {
      Spectrum a = spectrum_from_json(j.at("alpha"));
      std::vector<Spectrum> bs;
      for (const auto& jb : j.at("betas")) bs.push_back(spectrum_from_json(jb));
      int n = o.N > 0 ? o.N : j.value("N", static_cast<int>(a.size()));
      return std::tuple{std::move(a), std::move(bs), n};
    });
    HornCatalog cat(static_cast<int>(betas.size()));
    // both orientations: empty output is equivalent to exact-sum feasibility
    violations = scan_finite(cat, alpha, betas, N, HornSetKind::T, FiniteForm::direct, opts);
    auto rev = scan_finite_reverse(cat, alpha, betas, N, opts);
    violations.insert(violations.end(), rev.begin(), rev.end());
  } else if (o.mode == "extended") {
    auto [alpha, betas, N] = parse_instance([&] {
      TwoSidedSpectrum a = two_sided_from_json(j.at("alpha"));
      std::vector<TwoSidedSpectrum> bs;
      for (const auto& jb : j.at("betas")) bs.push_back(two_sided_from_json(jb));
      int n = o.N > 0 ? o.N : j.value("N_max", j.value("N", -1));
      return std::tuple{std::move(a), std::move(bs), n};
    });
    if (N < 1) throw UsageError("extended mode needs a truncation order: --N or \"N_max\"");
    HornCatalog cat(static_cast<int>(betas.size()));
    violations = scan_extended(cat, alpha, betas, N, opts);
  } else if (o.mode == "positive") {
    auto [alpha, betas, N] = parse_instance([&] {
      Spectrum a = spectrum_from_json(j.at("alpha"));
      std::vector<Spectrum> bs;
      for (const auto& jb : j.at("betas")) bs.push_back(spectrum_from_json(jb));
      int n = o.N > 0 ? o.N : j.value("N_max", j.value("N", -1));
      return std::tuple{std::move(a), std::move(bs), n};
    });
    if (N < 1) throw UsageError("positive mode needs a truncation order: --N or \"N_max\"");
    int q_cap = o.q_cap >= 0 ? o.q_cap : j.value("q_cap", -1);
    HornCatalog cat(static_cast<int>(betas.size()));
    violations = scan_positive(cat, alpha, betas, N, q_cap, opts);
  } else {
    throw UsageError("unknown mode '" + o.mode + "' (expected finite, extended, or positive)");
  }

  if (o.as_json) {
    json rep = make_report("check", g);
    rep["mode"] = o.mode;
    rep["count"] = violations.size();
    json arr = json::array();
    for (const auto& r : violations) arr.push_back(record_to_json(r));
    rep["violations"] = std::move(arr);
    std::cout << rep.dump(2) << '\n';
  } else {
    std::cout << records_to_csv(violations);
  }
  std::cerr << violations.size() << " violated record(s)\n";
  return violations.empty() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// interpolate

struct InterpOpts {
  std::string input;
  bool integer_mode = false;
  double tol = 1e-9;
};

int run_interpolate(const GlobalOpts& g, const InterpOpts& o) {
  json j = load_instance(o.input);
  auto [alo, ahi, blo, bhi, N] = parse_instance([&] {
    Spectrum a_lo = spectrum_from_json(j.at("alpha_lo"));
    Spectrum a_hi = spectrum_from_json(j.at("alpha_hi"));
    std::vector<Spectrum> b_lo, b_hi;
    for (const auto& jb : j.at("betas_lo")) b_lo.push_back(spectrum_from_json(jb));
    for (const auto& jb : j.at("betas_hi")) b_hi.push_back(spectrum_from_json(jb));
    if (b_lo.size() != b_hi.size())
      throw std::invalid_argument("betas_lo and betas_hi disagree on the summand count");
    int n = j.value("N", static_cast<int>(a_lo.size()));
    return std::tuple{std::move(a_lo), std::move(a_hi), std::move(b_lo), std::move(b_hi), n};
  });
  HornCatalog cat(static_cast<int>(blo.size()));
  InterpolationResult res = interpolate(cat, alo, ahi, blo, bhi, N, o.integer_mode, o.tol);
  for (const auto& line : res.steps) std::cerr << line << '\n';
  json rep = make_report("interpolate", g);
  rep["integer"] = o.integer_mode;
  rep["result"] = interpolation_to_json(res);
  std::cout << rep.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// partial

struct PartialFileOpts {
  std::string input;
  double tol = 1e-9;
};

std::tuple<PartialSpectrum, std::vector<PartialSpectrum>, int> parse_partial_instance(const json& j) {
  return parse_instance([&] {
    PartialSpectrum a = partial_from_json(j.at("alpha"));
    std::vector<PartialSpectrum> bs;
    for (const auto& jb : j.at("betas")) bs.push_back(partial_from_json(jb));
    int n = j.at("N").get<int>();
    return std::tuple{std::move(a), std::move(bs), n};
  });
}

int run_partial_check(const GlobalOpts& g, const PartialFileOpts& o) {
  auto [alpha, betas, N] = parse_partial_instance(load_instance(o.input));
  HornCatalog cat(static_cast<int>(betas.size()));
  PartialCheck res = check_partial(cat, alpha, betas, N, {o.tol, g.threads});
  std::cout << records_to_csv(res.violations);
  std::cerr << (res.feasible ? "feasible\n" : "infeasible\n");
  return res.feasible ? kExitOk : kExitViolation;
}

int run_partial_realize(const GlobalOpts& g, const PartialFileOpts& o) {
  auto [alpha, betas, N] = parse_partial_instance(load_instance(o.input));
  HornCatalog cat(static_cast<int>(betas.size()));
  RealizedPartial res = realize_partial(cat, alpha, betas, N, {o.tol, g.threads});
  json rep = make_report("partial-realize", g);
  rep["alpha"] = spectrum_to_json(res.alpha);
  json bs = json::array();
  for (const auto& b : res.betas) bs.push_back(spectrum_to_json(b));
  rep["betas"] = std::move(bs);
  rep["padding"] = res.padding;
  rep["interpolation"] = interpolation_to_json(res.interp);
  std::cout << rep.dump(2) << '\n';
  return kExitOk;
}

struct JohnsonOpts {
  std::vector<std::string> betas;
  int p = 0;  // 0 means every position
  int N = 0;
};

int run_partial_johnson(const GlobalOpts&, const JohnsonOpts& o) {
  std::vector<Spectrum> betas;
  for (const auto& s : o.betas) betas.push_back(parse_spectrum(s));
  if (betas.empty()) throw UsageError("at least one --beta is required");
  if (o.N < 1) throw UsageError("--N must be at least 1");
  if (o.p > o.N) throw UsageError("--p cannot exceed --N");
  std::vector<int> ps;
  if (o.p > 0)
    ps.push_back(o.p);
  else
    for (int p = 1; p <= o.N; ++p) ps.push_back(p);
  std::cout << "p,lower,upper\n";
  for (int p : ps) {
    auto [lo, hi] = johnson_bounds(betas, p, o.N);
    std::cout << p << ',' << detail::number_cell(lo) << ',' << detail::number_cell(hi) << '\n';
  }
  return kExitOk;
}

struct LowrankOpts {
  std::vector<std::string> betas;
  int rho = 0;
  int N = 0;
  double tol = 1e-9;
};

int run_partial_lowrank(const GlobalOpts& g, const LowrankOpts& o) {
  std::vector<Spectrum> betas;
  for (const auto& s : o.betas) betas.push_back(parse_spectrum(s));
  if (betas.empty()) throw UsageError("at least one --beta is required");
  if (o.N < 1) throw UsageError("--N must be at least 1");
  HornCatalog cat(static_cast<int>(betas.size()));
  PartialCheck res = lowrank_check(cat, betas, o.rho, o.N, {o.tol, g.threads});
  std::cout << records_to_csv(res.violations);
  std::cerr << (res.feasible ? "feasible\n" : "infeasible\n");
  return res.feasible ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// witness

struct SynthOpts {
  std::string alpha;
  std::vector<std::string> betas;
  double tol = 1e-8;
  int max_iter = 10000;
  int restarts = 5;
  bool skip_feasibility = false;
};

int run_witness_synth(const GlobalOpts& g, const SynthOpts& o) {
  Spectrum alpha = parse_spectrum(o.alpha);
  std::vector<Spectrum> betas;
  for (const auto& s : o.betas) betas.push_back(parse_spectrum(s));
  if (betas.empty()) throw UsageError("at least one --beta is required");
  HornCatalog cat(static_cast<int>(betas.size()));
  SynthesisOptions so;
  so.tol = o.tol;
  so.max_iter = o.max_iter;
  so.restarts = o.restarts;
  so.seed = g.seed;
  so.skip_feasibility_check = o.skip_feasibility;
  WitnessSet w = synthesize(cat, alpha, betas, so);
  json rep = make_report("witness-synth", g);
  rep["alpha"] = spectrum_to_json(alpha);
  json bs = json::array();
  for (const auto& b : betas) bs.push_back(spectrum_to_json(b));
  rep["betas"] = std::move(bs);
  rep["witness"] = witness_to_json(w);
  std::cout << rep.dump(2) << '\n';
  std::cerr << (w.converged ? "converged" : "did not converge") << " after " << w.iterations
            << " iteration(s); sum residual " << w.sum_residual << '\n';
  return w.converged ? kExitOk : kExitViolation;
}

struct ReduceOpts {
  std::string input;
  std::string family = "extended";
  std::string I;
  std::vector<std::string> J;
  std::string q;
  int N = 0;
  double tol = 1e-6;
  bool geq = false;
};

int run_witness_reduce(const GlobalOpts& g, const ReduceOpts& o) {
  json j = load_instance(o.input);
  WitnessSet W = parse_instance(
      [&] { return witness_from_json(j.contains("witness") ? j.at("witness") : j); });

  InequalityRecord rec;
  if (o.family == "horn") {
    rec.family = Family::horn;
  } else if (o.family == "sym") {
    rec.family = Family::horn_sym;
    rec.geq = o.geq;
  } else if (o.family == "extended") {
    rec.family = Family::extended;
  } else if (o.family == "reverse") {
    rec.family = Family::reverse_positive;
    rec.geq = true;
  } else {
    throw UsageError("unknown family '" + o.family + "' (expected horn, sym, extended, or reverse)");
  }

  if (o.N < 1) throw UsageError("--N must be at least 1");
  try {
    std::vector<IndexSet> J;
    if (o.J.empty())
      J.assign(W.B.size(), IndexSet(std::vector<int>{}));
    else
      for (const auto& s : o.J) J.emplace_back(parse_ints(s));
    rec.tuple = HornTuple(o.N, IndexSet(parse_ints(o.I)), std::move(J));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad tuple: ") + e.what());
  }
  if (!o.q.empty()) rec.q = parse_ints(o.q);
  if (rec.family == Family::extended || rec.family == Family::reverse_positive) {
    if (rec.q.empty()) rec.q.assign(static_cast<std::size_t>(rec.tuple.m()), 0);
    if (rec.q.size() != static_cast<std::size_t>(rec.tuple.m()))
      throw UsageError("--q needs one entry per summand");
  }

  ReducingReport rep = detect_reducing(W, rec, o.tol, g.seed);
  json out = make_report("witness-reduce", g);
  out["family"] = family_name(rec.family);
  out["tuple"] = tuple_to_json(rec.tuple);
  out["q"] = rec.q;
  out["rank"] = rep.rank;
  out["slack"] = rep.slack;
  out["commutator_A"] = rep.commutator_A;
  out["commutator_B"] = rep.commutator_B;
  out["compressed_alpha"] = spectrum_to_json(rep.compressed_alpha);
  json cb = json::array(), eb = json::array();
  for (const auto& s : rep.compressed_betas) cb.push_back(spectrum_to_json(s));
  for (const auto& s : rep.expected_betas) eb.push_back(spectrum_to_json(s));
  out["compressed_betas"] = std::move(cb);
  out["expected_alpha"] = spectrum_to_json(rep.expected_alpha);
  out["expected_betas"] = std::move(eb);
  out["max_list_error"] = rep.max_list_error;
  out["within_tol"] = rep.within_tol;
  out["projector"] = matrix_to_json(rep.P);
  std::cout << out.dump(2) << '\n';
  std::cerr << (rep.within_tol ? "reducing projector found" : "no reducing projector within tolerance")
            << "; rank " << rep.rank << ", max list error " << rep.max_list_error << '\n';
  return rep.within_tol ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// hive

struct HiveOpts {
  int W = 60;
  int H = 60;
  double tol = 1e-12;
  int window = 10;
  double allowance = -1.0;  // < 0: use 1/(2(H+2)) plus rounding headroom
  bool example = false;
  bool dump_csv = false;
};

int run_hive_verify(const GlobalOpts&, const HiveOpts& o) {
  if (!o.example) throw UsageError("only the built-in example hive is supported: pass --example");
  if (o.W < 1 || o.H < 1) throw UsageError("--W and --H must be at least 1");
  Hive h = example_hive(o.W, o.H);
  Spectrum alpha = sequence(o.W, [](int i) { return 1.0 / (i + 2); });
  Spectrum beta = sequence(o.H, [](int j) { return 0.5 / (j + 1); });
  Spectrum gamma = sequence(o.W, [](int i) { return 0.5 / (i + 1); });
  double allowance = o.allowance >= 0 ? o.allowance : 0.5 / (o.H + 2) + 1e-12;
  int window = std::min(o.window, o.W);

  ContinuousLrReport rep = verify_continuous_lr(alpha, beta, gamma, h, o.tol);
  // the tail converges locally in i, so only a leading window is held to the
  // allowance; the full-row gap is reported for context
  double window_gap = 0.0;
  for (int i = 1; i <= window; ++i)
    window_gap = std::max(window_gap, std::abs(h.z(i, o.H) + gamma[static_cast<std::size_t>(i - 1)]));
  bool pass = rep.min_rhombus_slack >= -o.tol && rep.max_boundary_error <= o.tol &&
              window_gap <= allowance;

  std::ostream& rout = o.dump_csv ? std::cerr : std::cout;
  rout << "rhombus slack min:   " << rep.min_rhombus_slack << '\n'
       << "boundary error max:  " << rep.max_boundary_error << '\n'
       << "tail gap (i <= " << window << "):   " << window_gap << "  (allowance " << allowance
       << ")\n"
       << "tail gap (full row): " << rep.tail_gap << '\n'
       << (pass ? "PASS" : "FAIL") << '\n';
  if (o.dump_csv) std::cout << hive_to_csv(h);
  return pass ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// lr

struct LrOpts {
  std::string lambda;
  std::vector<std::string> mus;
  std::string nu;
};

int run_lr(const GlobalOpts&, const LrOpts& o) {
  auto part = [](const std::string& csv) {
    try {
      return Partition(parse_ints(csv));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad partition: ") + e.what());
    }
  };
  Partition lambda = part(o.lambda);
  if (o.mus.empty()) throw UsageError("at least one --mu is required");
  long long c = 0;
  if (!o.nu.empty()) {
    if (o.mus.size() != 1) throw UsageError("--nu combines with exactly one --mu");
    c = lr_coeff(lambda, part(o.mus.front()), part(o.nu));
  } else {
    std::vector<Partition> mus;
    for (const auto& s : o.mus) mus.push_back(part(s));
    c = multi_lr_coeff(lambda, mus);
  }
  std::cout << c << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// worked examples

int ex_johnson(const GlobalOpts& g) {
  const Spectrum beta{3.0, 1.0}, gamma{2.0, 0.0};
  const int N = 2;
  HornCatalog cat(2);
  ScanOptions opts{1e-9, g.threads};
  const std::vector<PartialSpectrum> full{
      PartialSpectrum(std::map<int, double>{{1, 3.0}, {2, 1.0}}),
      PartialSpectrum(std::map<int, double>{{1, 2.0}, {2, 0.0}})};
  const double expected[2][2] = {{3.0, 5.0}, {1.0, 3.0}};
  bool ok = true;
  std::cout << "p,lower,upper\n";
  for (int p = 1; p <= N; ++p) {
    auto [lo, hi] = johnson_bounds({beta, gamma}, p, N);
    std::cout << p << ',' << lo << ',' << hi << '\n';
    ok = ok && lo == expected[p - 1][0] && hi == expected[p - 1][1];
    for (double v : {lo - 0.5, lo, 0.5 * (lo + hi), hi, hi + 0.5}) {
      bool feasible =
          check_partial(cat, PartialSpectrum(std::map<int, double>{{p, v}}), full, N, opts).feasible;
      bool inside = lo - 1e-9 <= v && v <= hi + 1e-9;
      if (feasible != inside) {
        std::cerr << "grid mismatch at p=" << p << ", value " << v << '\n';
        ok = false;
      }
    }
  }
  std::cerr << (ok ? "closed-form bounds match the envelope scan\n"
                   : "closed-form bounds DISAGREE with the envelope scan\n");
  return ok ? kExitOk : kExitViolation;
}

int ex_pinned_pair(const GlobalOpts&) {
  const int N = 5;
  const PartialSpectrum pins(std::map<int, double>{{1, 5.0}, {3, 2.0}});
  const Envelope env = min_max(pins, N);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Spectrum want_min{5.0, 2.0, 2.0, -inf, -inf};
  const Spectrum want_max{5.0, 5.0, 2.0, 2.0, 2.0};
  std::cout << "i,min,max\n";
  for (int i = 1; i <= N; ++i)
    std::cout << i << ',' << detail::number_cell(env.min[static_cast<std::size_t>(i - 1)]) << ','
              << detail::number_cell(env.max[static_cast<std::size_t>(i - 1)]) << '\n';
  bool ok = env.min == want_min && env.max == want_max;
  std::cerr << (ok ? "staircases match the pinned pair\n" : "unexpected staircases\n");
  return ok ? kExitOk : kExitViolation;
}

int ex_lowrank(const GlobalOpts& g) {
  HornCatalog cat(2);
  ScanOptions opts{1e-9, g.threads};
  struct Case {
    Spectrum beta, gamma;
    int rho;
    bool want;
  };
  // rank 0 pins the sum at zero, so the second summand must be the negated
  // first one; without the cap only positivity of the feasible top is left
  const std::vector<Case> cases{{{1.0, 0.0}, {0.0, -1.0}, 0, true},
                                {{1.0, 0.0}, {1.0, 0.0}, 0, false},
                                {{1.0, 0.0}, {1.0, 0.0}, 2, true}};
  bool ok = true;
  std::cout << "beta,gamma,rho,verdict\n";
  for (const auto& c : cases) {
    bool feasible = lowrank_check(cat, {c.beta, c.gamma}, c.rho, 2, opts).feasible;
    std::cout << '(' << c.beta[0] << ' ' << c.beta[1] << "),(" << c.gamma[0] << ' ' << c.gamma[1]
              << ")," << c.rho << ',' << (feasible ? "feasible" : "infeasible") << '\n';
    ok = ok && feasible == c.want;
  }
  std::cerr << (ok ? "verdicts match\n" : "unexpected verdicts\n");
  return ok ? kExitOk : kExitViolation;
}

int ex_harmonic_scan(const GlobalOpts& g, const Spectrum& gamma, int N_max, bool expect_violation) {
  const int K = static_cast<int>(gamma.size());
  Spectrum alpha = sequence(K, [](int i) { return 1.0 / i; });
  Spectrum beta = sequence(K, [](int i) { return 0.5 / i; });
  HornCatalog cat(2);
  auto t0 = std::chrono::steady_clock::now();
  auto bad = scan_positive(cat, alpha, {beta, gamma}, N_max, -1, {1e-9, g.threads});
  double secs = seconds_since(t0);
  if (!expect_violation) {
    std::cout << records_to_csv(bad);
  } else {
    // the table runs to tens of thousands of rows; show only the full-shift
    // record that pins the two harmonic partial sums against each other
    std::vector<InequalityRecord> highlight;
    for (const auto& rec : bad)
      if (rec.tuple.r() == 0 && rec.q == std::vector<int>{8, 8} &&
          std::abs(rec.lhs - 3.3807289932289937) <= 1e-6 &&
          std::abs(rec.rhs - 4.0767857142857146) <= 1e-6)
        highlight.push_back(rec);
    std::cout << records_to_csv(highlight);
    std::cerr << (highlight.empty() ? "MISSING the expected full-shift record\n"
                                    : "the full-shift record shows the expected harmonic sums\n");
  }
  std::cerr << bad.size() << " violated record(s) through order " << N_max << " in " << secs
            << " s\n";
  return bad.empty() ? kExitOk : kExitViolation;
}

int ex_harmonic_feasible(const GlobalOpts& g) {
  return ex_harmonic_scan(g, sequence(64, [](int i) { return 0.5 / i; }), 4, false);
}

int ex_harmonic_upper(const GlobalOpts& g) {
  return ex_harmonic_scan(g, sequence(64, [](int i) { return 1.0 / (2 * i - 1); }), 4, false);
}

int ex_harmonic_violation(const GlobalOpts& g) {
  return ex_harmonic_scan(g, sequence(16, [](int i) { return 1.0 / i; }), 8, true);
}

int ex_harmonic_reducing(const GlobalOpts& g) {
  // two harmonic-tail summands whose top blocks force a tight shifted record
  const int K = 16;
  Eigen::VectorXcd b(K), c(K);
  b(0) = 0.5;
  b(1) = 0.0;
  c(0) = 0.0;
  c(1) = 1.0;
  for (int n = 2; n < K; ++n) {
    b(n) = 0.5 / n;
    c(n) = 0.5 / n;
  }
  std::mt19937_64 rng(g.seed);
  Eigen::MatrixXcd U = detail::random_unitary(K, rng);
  WitnessSet W;
  W.B = {U * b.asDiagonal() * U.adjoint(), U * c.asDiagonal() * U.adjoint()};
  W.A = W.B[0] + W.B[1];
  W.sum_residual = 0.0;
  W.spectrum_errors = {0.0, 0.0};
  W.seed = g.seed;
  W.iterations = 0;
  W.converged = true;

  InequalityRecord rec;
  rec.family = Family::reverse_positive;
  rec.geq = true;
  rec.tuple = HornTuple(3, IndexSet({3}), {IndexSet({2}), IndexSet({2})});
  rec.q = {1, 1};

  ReducingReport rep = detect_reducing(W, rec, 1e-6, g.seed);
  auto print_list = [](const char* label, const Spectrum& s) {
    std::cout << label << ':';
    for (double v : s) std::cout << ' ' << v;
    std::cout << '\n';
  };
  std::cout << "rank: " << rep.rank << '\n'
            << "record slack: " << rep.slack << '\n'
            << "commutator with the sum: " << rep.commutator_A << '\n'
            << "commutators with the summands: " << rep.commutator_B[0] << ' '
            << rep.commutator_B[1] << '\n';
  print_list("compressed alpha", rep.compressed_alpha);
  print_list("compressed beta ", rep.compressed_betas[0]);
  print_list("compressed gamma", rep.compressed_betas[1]);
  std::cout << "max list error: " << rep.max_list_error << '\n';
  bool ok = rep.within_tol && rep.rank == 2;
  std::cerr << (ok ? "found the rank-2 reducing projector\n" : "reducing projector NOT found\n");
  return ok ? kExitOk : kExitViolation;
}

int ex_hive(const GlobalOpts& g) {
  HiveOpts o;
  o.example = true;
  return run_hive_verify(g, o);
}

struct Scenario {
  const char* name;
  const char* blurb;
  int (*fn)(const GlobalOpts&);
};

constexpr Scenario kScenarios[] = {
    {"johnson", "sharp range of one pinned eigenvalue of a two-summand sum", ex_johnson},
    {"pinned-pair", "envelope staircases with two pinned eigenvalues", ex_pinned_pair},
    {"lowrank", "rank-capped feasibility verdicts for three small pairs", ex_lowrank},
    {"harmonic-feasible", "harmonic spectrum splits into two halved-harmonic summands",
     ex_harmonic_feasible},
    {"harmonic-upper", "harmonic spectrum against odd-reciprocal summands", ex_harmonic_upper},
    {"harmonic-violation", "a summand equal to the harmonic sum itself is rejected (exits 1)",
     ex_harmonic_violation},
    {"harmonic-reducing",
     "tight shifted record on a 16-point witness yields a rank-2 reducing projector",
     ex_harmonic_reducing},
    {"hive", "continuous LR certificate for the harmonic triple on a 60 x 60 window", ex_hive},
};

int run_examples_list() {
  for (const auto& s : kScenarios) std::cout << s.name << "  -  " << s.blurb << '\n';
  return kExitOk;
}

int run_examples_run(const GlobalOpts& g, const std::string& name) {
  for (const auto& s : kScenarios)
    if (name == s.name) {
      std::cerr << '[' << s.name << "] " << s.blurb << '\n';
      return s.fn(g);
    }
  throw UsageError("unknown scenario '" + name + "'; see `horn examples list`");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra of sums of selfadjoint operators: enumeration, scans, and witnesses"};
  app.fallthrough();
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--threads", g.threads, "worker threads for scans")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized steps")->capture_default_str();
  app.set_version_flag("--version", std::string("horn ") + kVersion);

  int rc = kExitOk;

  TriplesOpts to;
  auto* tri = app.add_subcommand("triples", "enumerate the recursive index-tuple families");
  tri->add_option("--kind", to.kind, "family kind: T, Tbar, or Tdot")->capture_default_str();
  tri->add_option("--m", to.m, "number of summands")->capture_default_str();
  tri->add_option("--N", to.N, "ambient size")->required();
  tri->add_option("--r", to.r, "restrict to one cardinality (default: all of 0..N)");
  tri->add_flag("--json", to.as_json, "emit JSON instead of text lines");
  tri->add_flag("--count-only", to.count_only, "emit bare counts as CSV");
  tri->callback([&] { rc = run_triples(g, to); });

  CheckOpts co;
  auto* chk = app.add_subcommand("check", "scan a JSON instance for violated inequalities");
  chk->add_option("--mode", co.mode, "finite, extended, or positive")->capture_default_str();
  chk->add_option("--input", co.input, "instance file, or - for stdin")->required();
  chk->add_option("--N", co.N, "matrix size (finite) or truncation order (extended/positive)");
  chk->add_option("--q-cap", co.q_cap, "cap on the total shift in positive mode");
  chk->add_option("--tol", co.tol, "violation tolerance")->capture_default_str();
  chk->add_flag("--json", co.as_json, "emit JSON instead of the CSV table");
  chk->callback([&] { rc = run_check(g, co); });

  InterpOpts io;
  auto* itp = app.add_subcommand("interpolate", "spectra between entrywise bounds");
  itp->add_option("--input", io.input, "instance file, or - for stdin")->required();
  itp->add_flag("--integer", io.integer_mode, "keep integral data integral");
  itp->add_option("--tol", io.tol, "tightness tolerance")->capture_default_str();
  itp->callback([&] { rc = run_interpolate(g, io); });

  auto* par = app.add_subcommand("partial", "partially specified spectra");
  par->require_subcommand(1);
  PartialFileOpts pco;
  auto* pchk = par->add_subcommand("check", "feasibility of pinned eigenvalues");
  pchk->add_option("--input", pco.input, "instance file, or - for stdin")->required();
  pchk->add_option("--tol", pco.tol, "violation tolerance")->capture_default_str();
  pchk->callback([&] { rc = run_partial_check(g, pco); });
  PartialFileOpts pro;
  auto* prl = par->add_subcommand("realize", "extend pinned data to full spectra");
  prl->add_option("--input", pro.input, "instance file, or - for stdin")->required();
  prl->add_option("--tol", pro.tol, "tightness tolerance")->capture_default_str();
  prl->callback([&] { rc = run_partial_realize(g, pro); });
  JohnsonOpts jo;
  auto* pjn = par->add_subcommand("johnson", "sharp range of one eigenvalue of the sum");
  pjn->add_option("--beta", jo.betas, "summand spectrum as a comma list, repeatable")->required();
  pjn->add_option("--p", jo.p, "position to bound (default: all of 1..N)");
  pjn->add_option("--N", jo.N, "matrix size")->required();
  pjn->callback([&] { rc = run_partial_johnson(g, jo); });
  LowrankOpts lo;
  auto* plr = par->add_subcommand("lowrank", "positive completion under a rank cap");
  plr->add_option("--beta", lo.betas, "summand spectrum as a comma list, repeatable")->required();
  plr->add_option("--rho", lo.rho, "rank cap on the sum")->required();
  plr->add_option("--N", lo.N, "matrix size")->required();
  plr->add_option("--tol", lo.tol, "violation tolerance")->capture_default_str();
  plr->callback([&] { rc = run_partial_lowrank(g, lo); });

  auto* wit = app.add_subcommand("witness", "matrix witnesses for spectral data");
  wit->require_subcommand(1);
  SynthOpts so;
  auto* wsy = wit->add_subcommand("synth", "alternating-projection synthesis of a witness");
  wsy->add_option("--alpha", so.alpha, "target spectrum of the sum, comma list")->required();
  wsy->add_option("--beta", so.betas, "summand spectrum, repeatable")->required();
  wsy->add_option("--tol", so.tol, "residual tolerance")->capture_default_str();
  wsy->add_option("--max-iter", so.max_iter, "iteration cap per restart")->capture_default_str();
  wsy->add_option("--restarts", so.restarts, "extra randomized restarts")->capture_default_str();
  wsy->add_flag("--skip-feasibility", so.skip_feasibility,
                "skip the trace and inequality prechecks");
  wsy->callback([&] { rc = run_witness_synth(g, so); });
  ReduceOpts ro;
  auto* wrd = wit->add_subcommand("reduce", "reducing projector behind a tight record");
  wrd->add_option("--input", ro.input, "witness file from synth, or - for stdin")->required();
  wrd->add_option("--family", ro.family, "horn, sym, extended, or reverse")->capture_default_str();
  wrd->add_option("--N", ro.N, "ambient size of the index tuple")->required();
  wrd->add_option("--I", ro.I, "lhs index set, comma list ('' for the empty set)");
  wrd->add_option("--J", ro.J, "rhs index set, one per summand, repeatable");
  wrd->add_option("--q", ro.q, "per-summand shifts for extended or reverse records");
  wrd->add_option("--tol", ro.tol, "commutator and list tolerance")->capture_default_str();
  wrd->add_flag("--geq", ro.geq, "use the reversed orientation of a sym record");
  wrd->callback([&] { rc = run_witness_reduce(g, ro); });

  auto* hiv = app.add_subcommand("hive", "continuous LR certificates");
  hiv->require_subcommand(1);
  HiveOpts ho;
  auto* hvv = hiv->add_subcommand("verify", "check a hive against its boundary data");
  hvv->add_flag("--example", ho.example, "use the built-in harmonic hive");
  hvv->add_option("--W", ho.W, "window width")->capture_default_str();
  hvv->add_option("--H", ho.H, "window height")->capture_default_str();
  hvv->add_option("--tol", ho.tol, "slack and boundary tolerance")->capture_default_str();
  hvv->add_option("--tail-window", ho.window, "leading positions held to the tail allowance")
      ->capture_default_str();
  hvv->add_option("--tail-allowance", ho.allowance,
                  "tail gap allowance (default: half the reciprocal window depth)");
  hvv->add_flag("--dump-csv", ho.dump_csv, "write the hive as CSV to stdout");
  hvv->callback([&] { rc = run_hive_verify(g, ho); });

  LrOpts lro;
  auto* lrc = app.add_subcommand("lr", "Littlewood-Richardson coefficients");
  lrc->add_option("--lambda", lro.lambda, "outer partition, comma list")->required();
  lrc->add_option("--mu", lro.mus, "inner partition, repeatable for multifactor products")
      ->required();
  lrc->add_option("--nu", lro.nu, "second inner partition of a single product");
  lrc->callback([&] { rc = run_lr(g, lro); });

  auto* ex = app.add_subcommand("examples", "worked scenarios with known outcomes");
  ex->require_subcommand(1);
  auto* exl = ex->add_subcommand("list", "list the scenario names");
  exl->callback([&] { rc = run_examples_list(); });
  std::string scenario;
  auto* exr = ex->add_subcommand("run", "run one scenario by name");
  exr->add_option("name", scenario, "scenario name")->required();
  exr->callback([&] { rc = run_examples_run(g, scenario); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return rc;
}
