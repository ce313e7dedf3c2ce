#include "classprod/cli.hpp"

#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "classprod/cert.hpp"
#include "classprod/width.hpp"

namespace classprod {

using ordered_json = nlohmann::ordered_json;

int exit_family(int errc_value) {
  switch (static_cast<Errc>(errc_value)) {
    case Errc::bad_spec:
    case Errc::non_prime:
    case Errc::odd_degree_involution:
    case Errc::reducible_modulus:
    case Errc::unsupported_rank:
    case Errc::unsupported_type_rank_field:
    case Errc::twist_needs_involution:
    case Errc::type_a_unsupported:
    case Errc::not_type_d:
    case Errc::rank_too_small:
    case Errc::bad_arity:
      return 2;
    case Errc::no_solution:
    case Errc::improper_witness:
    case Errc::not_in_s:
    case Errc::not_in_d:
    case Errc::not_in_r0_subgroup:
    case Errc::not_unipotent_upper:
    case Errc::not_unimodular:
    case Errc::excluded_commutator_pair:
    case Errc::constraint_violated:
    case Errc::param_out_of_subfield:
      return 3;
    case Errc::overflow:
    case Errc::budget_exhausted:
      return 4;
    case Errc::schema_mismatch:
    case Errc::corrupt_document:
    case Errc::malformed_certificate:
      return 6;
    default:
      return 5;
  }
}

namespace {

struct Ctx {
  std::string format = "json";
  int threads = 1;
  uint64_t seed = 0;
  std::ostringstream out;
};

std::string root_json(const Root& r) {
  std::string s = "[";
  for (size_t i = 0; i < r.c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(r.c[i]);
  }
  return s + "]";
}

ordered_json roots_json(const std::vector<Root>& rs) {
  ordered_json a = ordered_json::array();
  for (const Root& r : rs) {
    ordered_json row = ordered_json::array();
    for (int v : r.c) row.push_back(v);
    a.push_back(std::move(row));
  }
  return a;
}

void emit(Ctx& ctx, const ordered_json& j, const std::string& table) {
  if (ctx.format == "json")
    ctx.out << j.dump(2) << "\n";
  else
    ctx.out << table;
}

LieType lie_from_string(const std::string& s) {
  if (s == "A") return LieType::A;
  if (s == "B") return LieType::B;
  if (s == "C") return LieType::C;
  if (s == "D") return LieType::D;
  if (s == "BC") return LieType::BC;
  fail(Errc::bad_spec, "unknown root system type " + s);
}

std::vector<Elem> enumerate_group(const Realization& R, size_t cap) {
  auto set = bfs_generate(R, all_root_elements(R), cap, "S");
  std::vector<std::string> keys(set.keys.begin(), set.keys.end());
  std::sort(keys.begin(), keys.end());
  std::vector<Elem> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(decode_canon(R, k));
  return out;
}

Elem random_element(const Realization& R, std::mt19937_64& rng, int len = 25) {
  auto g = all_root_elements(R);
  Elem e = R.identity();
  for (int i = 0; i < len; ++i) e = emul(e, g[rng() % g.size()]);
  return e;
}

// ---- rootsys --------------------------------------------------------------
int cmd_rootsys(Ctx& ctx, const std::string& sys) {
  size_t i = (sys.rfind("BC", 0) == 0) ? 2 : 1;
  LieType ty = lie_from_string(sys.substr(0, i));
  int rank = 0;
  try {
    rank = std::stoi(sys.substr(i));
  } catch (const std::exception&) {
    fail(Errc::bad_spec, "bad rank in " + sys);
  }
  RootSystem rs = build_root_system(ty, rank);
  ordered_json j;
  j["type"] = sys.substr(0, i);
  j["rank"] = rank;
  j["positive_roots"] = roots_json(rs.positive);
  ordered_json hs = ordered_json::array();
  for (const Root& r : rs.positive) hs.push_back(rs.ht(r));
  j["heights"] = hs;
  j["fundamental"] = roots_json(rs.fundamental);
  j["r0"] = ordered_json::parse(root_json(rs.r0));
  j["pi1"] = roots_json(rs.pi1);
  j["sigma1_plus"] = roots_json(rs.sigma1_plus);
  j["delta"] = roots_json(rs.delta);
  j["theta"] = roots_json(rs.theta);

  std::ostringstream t;
  t << "root system " << sys << "\n";
  t << "root          ht  class\n";
  for (const Root& r : rs.positive) {
    std::string cls = "";
    if (r == rs.r0) cls = "r0";
    else if (rs.in_sigma1(r)) cls = "sigma1";
    else if (std::find(rs.delta.begin(), rs.delta.end(), r) != rs.delta.end()) cls = "delta";
    std::string nm = r.str();
    t << nm << std::string(nm.size() < 14 ? 14 - nm.size() : 1, ' ')
      << rs.ht(r) << "   " << cls << "\n";
  }
  emit(ctx, j, t.str());
  return 0;
}

// ---- verify-comrel -----------------------------------------------------------
int cmd_verify_comrel(Ctx& ctx, const std::string& spec) {
  auto R = build_realization(spec);
  const RootSystem& rs = R->rs;
  std::vector<Root> sigma1_all, sigma_all;
  for (const Root& v : rs.sigma1_plus) {
    sigma1_all.push_back(v);
    sigma1_all.push_back(-v);
  }
  for (const Root& v : rs.positive) {
    sigma_all.push_back(v);
    sigma_all.push_back(-v);
  }
  ordered_json rows = ordered_json::array();
  std::ostringstream t;
  t << "u, v, witness_class, status\n";
  bool all_ok = true;
  for (const Root& u : sigma1_all)
    for (const Root& v : sigma_all) {
      if (u == v || (u + v).is_zero()) continue;
      Root s = u + v;
      if (!rs.is_root(s)) continue;
      std::string wclass, status;
      if (excluded_pair(*R, u, v)) {
        wclass = "excluded";
        status = "skipped";
      } else if (star_case(*R, u, v)) {
        wclass = "proper-pair";
        bool ok = true;
        size_t cv = R->param_count(v);
        for (size_t i = 1; i < cv && ok; ++i)
          for (size_t j = 1; j < cv && ok; ++j) {
            RootParams p1 = R->param_at(v, i), p2 = R->param_at(v, j);
            if (!fprime_span_full(*R->F, p1.t, p2.t)) continue;
            Witness w = make_witness_pair(*R, v, p1.t, p2.t);
            size_t targets = R->param_count(s);
            for (size_t ti = 0; ti < targets && ok; ++ti) {
              scalar_t tc = R->param_at(s, ti).t;
              try {
                solve_comrel(*R, u, w, tc);
              } catch (const Error&) {
                ok = false;
              }
            }
          }
        status = ok ? "pass" : "FAIL";
        all_ok = all_ok && ok;
      } else {
        wclass = "proper";
        bool ok = true;
        size_t cv = R->param_count(v);
        for (size_t i = 0; i < cv && ok; ++i) {
          RootParams p = R->param_at(v, i);
          if (p.t == 0) continue;
          Witness w = make_witness(*R, v, p);
          size_t targets = R->param_count(s);
          for (size_t ti = 0; ti < targets && ok; ++ti) {
            scalar_t tc = R->param_at(s, ti).t;
            try {
              solve_comrel(*R, u, w, tc);
            } catch (const Error&) {
              ok = false;
            }
          }
        }
        status = ok ? "pass" : "FAIL";
        all_ok = all_ok && ok;
      }
      ordered_json row;
      row["u"] = ordered_json::parse(root_json(u));
      row["v"] = ordered_json::parse(root_json(v));
      row["witness_class"] = wclass;
      row["status"] = status;
      rows.push_back(std::move(row));
      t << u.str() << ", " << v.str() << ", " << wclass << ", " << status << "\n";
    }
  ordered_json j;
  j["group"] = R->groupspec;
  j["rows"] = std::move(rows);
  j["all_pass"] = all_ok;
  emit(ctx, j, t.str());
  return all_ok ? 0 : 3;
}

// ---- factor -----------------------------------------------------------------
int cmd_factor(Ctx& ctx, const std::string& spec, const std::string& element,
               const std::string& kind, const std::string& outpath, int sample) {
  auto R = build_realization(spec);
  auto run_one = [&](const Elem& g) -> Certificate {
    if (kind == "sl") return sl_factor(*R, g);
    Decomposer dec = make_decomposer(R);
    if (kind == "main") return factor_group(dec, g);
    if (kind == "sbar") return sbar_factor(dec, g);
    if (kind == "lp") return lp_certificate(dec.lp, g);
    if (kind == "uplus") return factor_u_plus(dec.plus, g);
    if (kind == "d") return factor_d(dec.plus, g);
    if (kind == "r0") return factor_r0(dec.plus, g);
    fail(Errc::bad_spec, "unknown factor kind " + kind);
  };

  if (element == "all") {
    std::vector<Elem> elems = enumerate_group(*R, mem_cap_from_env());
    Decomposer dec = make_decomposer(R);
    long maxlen = 0, met = 0;
    for (const Elem& g : elems) {
      Certificate c = (kind == "sl") ? sl_factor(*R, g) : factor_group(dec, g);
      require(verify_certificate(*R, c, g), Errc::internal, "emitted certificate failed");
      maxlen = std::max(maxlen, c.achieved_length);
      if (c.paper_bound_met || kind == "sl") ++met;
    }
    ordered_json j;
    j["group"] = R->groupspec;
    j["kind"] = kind;
    j["elements"] = elems.size();
    j["all_certified"] = true;
    j["max_length"] = maxlen;
    j["paper_bound_met"] = met;
    if (R->small_field_warning) j["quasisimple_warning"] = true;
    emit(ctx, j, "all " + std::to_string(elems.size()) + " elements certified, max length " +
                     std::to_string(maxlen) + "\n");
    return 0;
  }

  std::vector<Elem> targets;
  if (element == "random") {
    std::mt19937_64 rng(ctx.seed);
    for (int i = 0; i < std::max(1, sample); ++i) targets.push_back(random_element(*R, rng));
  } else {
    targets.push_back(decode_canon_hex(*R, element));
  }
  ordered_json certs = ordered_json::array();
  std::string last_json;
  for (const Elem& g : targets) {
    Certificate c = run_one(g);
    require(verify_certificate(*R, c, g), Errc::internal, "emitted certificate failed");
    last_json = certificate_to_json(c);
    certs.push_back(ordered_json::parse(last_json));
  }
  if (!outpath.empty()) {
    Certificate c = certificate_from_json(last_json, R->groupspec);
    store_certificate(c, outpath);
  }
  ordered_json j;
  j["group"] = R->groupspec;
  j["kind"] = kind;
  j["certificates"] = std::move(certs);
  if (R->small_field_warning) j["quasisimple_warning"] = true;
  emit(ctx, j, last_json);
  return 0;
}

// ---- verify-theorem -----------------------------------------------------------
int cmd_verify_theorem(Ctx& ctx, const std::string& spec, bool exhaustive, int sample) {
  auto R = build_realization(spec);
  Decomposer dec = make_decomposer(R);
  std::vector<Elem> elems;
  if (exhaustive) {
    elems = enumerate_group(*R, mem_cap_from_env());
  } else {
    std::mt19937_64 rng(ctx.seed);
    for (int i = 0; i < sample; ++i) elems.push_back(random_element(*R, rng));
  }
  long maxlen = 0, met = 0;
  std::map<int, long> blocks_histogram;
  bool all = true;
  for (const Elem& g : elems) {
    Certificate c = factor_group(dec, g);
    bool ok = verify_certificate(*R, c, g);
    all = all && ok;
    maxlen = std::max(maxlen, c.achieved_length);
    if (c.paper_bound_met) ++met;
    ++blocks_histogram[c.blocks];
  }
  ordered_json j;
  j["group"] = R->groupspec;
  j["mode"] = exhaustive ? "exhaustive" : "sample";
  j["elements"] = elems.size();
  j["all_certified"] = all;
  j["max_length"] = maxlen;
  j["paper_bound_met_fraction"] =
      elems.empty() ? 1.0 : static_cast<double>(met) / static_cast<double>(elems.size());
  ordered_json hb;
  for (auto& [b, c] : blocks_histogram) hb[std::to_string(b)] = c;
  j["blocks_histogram"] = std::move(hb);
  if (R->small_field_warning) j["quasisimple_warning"] = true;

  if (exhaustive) {
    // independent set-level confirmation through the width engine
    ElementSet G = bfs_generate(*R, all_root_elements(*R), mem_cap_from_env(), "S");
    std::vector<Root> pm1;
    for (const Root& v : R->rs.pi1) {
      pm1.push_back(v);
      pm1.push_back(-v);
    }
    ElementSet H = bfs_generate(*R, subgroup_generators(*R, pm1), mem_cap_from_env(), "S1");
    auto rep = coverage_width(*R, G, H, theorem_conjugators(dec), mem_cap_from_env(),
                              ctx.threads);
    ordered_json jc;
    jc["covered"] = rep.covered;
    jc["achieved_m"] = rep.achieved_m;
    jc["bound"] = 182;
    j["coverage"] = std::move(jc);
    if (!rep.covered || rep.achieved_m > 182) all = false;
  }

  std::ostringstream t;
  t << "verify-theorem " << R->groupspec << ": " << elems.size() << " elements, "
    << (all ? "all certified" : "FAILURES") << ", max length " << maxlen << "\n";
  emit(ctx, j, t.str());
  return all ? 0 : 3;
}

// ---- width ---------------------------------------------------------------------
int cmd_width(Ctx& ctx, const std::string& spec, const std::string& subgroup,
              const std::string& strategy, int pool, int budget) {
  auto R = build_realization(spec);
  require(subgroup == "s1", Errc::bad_spec, "only --subgroup s1 is implemented");
  ElementSet G = bfs_generate(*R, all_root_elements(*R), mem_cap_from_env(), "S");
  std::vector<Root> pm1;
  for (const Root& v : R->rs.pi1) {
    pm1.push_back(v);
    pm1.push_back(-v);
  }
  ElementSet H = bfs_generate(*R, subgroup_generators(*R, pm1), mem_cap_from_env(), "S1");

  ordered_json j;
  j["group"] = R->groupspec;
  j["subgroup"] = "s1";
  j["sizes"] = ordered_json::array();
  j["|G|"] = G.size();
  j["|H|"] = H.size();
  int m = 0;
  bool covered = false;
  std::vector<size_t> growth;
  if (strategy == "plan") {
    Decomposer dec = make_decomposer(R);
    auto rep = coverage_width(*R, G, H, theorem_conjugators(dec), mem_cap_from_env(),
                              ctx.threads);
    covered = rep.covered;
    m = rep.achieved_m;
    growth = rep.growth;
  } else if (strategy == "greedy") {
    auto rep = greedy_width_search(*R, G, H, random_conjugators(*R, pool, ctx.seed),
                                   budget, mem_cap_from_env());
    covered = rep.covered;
    m = rep.achieved_m;
    growth = rep.growth;
    ordered_json ch = ordered_json::array();
    for (int c : rep.chosen) ch.push_back(c);
    j["chosen"] = std::move(ch);
  } else {
    fail(Errc::bad_spec, "strategy must be plan or greedy");
  }
  ordered_json sizes = ordered_json::array();
  for (size_t s : growth) sizes.push_back(s);
  j["sizes"] = std::move(sizes);
  j["achieved_m"] = m;
  j["covered"] = covered;
  // information-theoretic floor
  double floor = std::log(static_cast<double>(G.size())) / std::log(static_cast<double>(H.size()));
  j["information_floor"] = static_cast<int>(std::ceil(floor - 1e-9));
  std::ostringstream t;
  t << "width " << R->groupspec << ": covered=" << (covered ? "yes" : "no")
    << " m=" << m << "\n";
  emit(ctx, j, t.str());
  return covered ? 0 : 3;
}

// ---- sl-factor ------------------------------------------------------------------
int cmd_sl_factor(Ctx& ctx, const std::string& spec, bool exhaustive, int sample) {
  auto R = build_realization(spec);
  std::vector<Elem> elems;
  if (exhaustive) {
    elems = enumerate_group(*R, mem_cap_from_env());
  } else {
    std::mt19937_64 rng(ctx.seed);
    for (int i = 0; i < sample; ++i) elems.push_back(random_element(*R, rng));
  }
  bool all = true;
  for (const Elem& g : elems) {
    Certificate c = sl_factor(*R, g);
    all = all && verify_certificate(*R, c, g);
  }
  ordered_json j;
  j["group"] = R->groupspec;
  j["mode"] = exhaustive ? "exhaustive" : "sample";
  j["elements"] = elems.size();
  j["all_factored"] = all;
  emit(ctx, j, "sl-factor: " + std::to_string(elems.size()) + " elements, " +
                   (all ? "all ok" : "FAILURES") + "\n");
  return all ? 0 : 3;
}

// ---- verify-cert -------------------------------------------------------------------
int cmd_verify_cert(Ctx& ctx, const std::string& path, const std::string& expect_group) {
  Certificate cert = load_certificate(path, expect_group);
  auto R = build_realization(cert.group);
  Elem g = decode_canon_hex(*R, cert.element_hex);
  bool ok = verify_certificate(*R, cert, g);
  ordered_json j;
  j["path"] = path;
  j["group"] = cert.group;
  j["kind"] = cert.kind;
  j["valid"] = ok;
  emit(ctx, j, std::string("certificate ") + (ok ? "valid" : "INVALID") + "\n");
  return ok ? 0 : 3;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  Ctx ctx;
  CLI::App app{"classical group product decompositions"};
  app.require_subcommand(1);

  std::string sys, spec, element = "random", kind = "main", outpath, path, expect_group;
  std::string subgroup = "s1", strategy = "plan";
  bool exhaustive = false;
  int sample = 10000, count = 1, pool = 64, budget = 182;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--format", ctx.format)->check(CLI::IsMember({"json", "table"}));
    c->add_option("--threads", ctx.threads)->check(CLI::Range(1, 64));
    c->add_option("--seed", ctx.seed);
  };

  CLI::App* c_root = app.add_subcommand("rootsys", "print a root system");
  c_root->add_option("system", sys)->required();
  add_common(c_root);

  CLI::App* c_com = app.add_subcommand("verify-comrel", "exhaustive commutator lemma check");
  c_com->add_option("groupspec", spec)->required();
  add_common(c_com);

  CLI::App* c_fac = app.add_subcommand("factor", "factor elements into certificates");
  c_fac->add_option("groupspec", spec)->required();
  c_fac->add_option("--element", element);
  c_fac->add_option("--kind", kind)
      ->check(CLI::IsMember({"main", "sbar", "lp", "uplus", "d", "r0", "sl"}));
  c_fac->add_option("--out", outpath);
  c_fac->add_option("--count", count);
  add_common(c_fac);

  CLI::App* c_thm = app.add_subcommand("verify-theorem", "certify elements and confirm coverage");
  c_thm->add_option("groupspec", spec)->required();
  c_thm->add_flag("--exhaustive", exhaustive);
  c_thm->add_option("--sample", sample);
  add_common(c_thm);

  CLI::App* c_w = app.add_subcommand("width", "product-set width engine");
  c_w->add_option("groupspec", spec)->required();
  c_w->add_option("--subgroup", subgroup);
  c_w->add_option("--strategy", strategy);
  c_w->add_option("--pool", pool);
  c_w->add_option("--budget", budget);
  add_common(c_w);

  CLI::App* c_sl = app.add_subcommand("sl-factor", "five-factor form for type A");
  c_sl->add_option("groupspec", spec)->required();
  c_sl->add_flag("--exhaustive", exhaustive);
  c_sl->add_option("--sample", sample);
  add_common(c_sl);

  CLI::App* c_vc = app.add_subcommand("verify-cert", "check a stored certificate");
  c_vc->add_option("path", path)->required();
  c_vc->add_option("--group", expect_group);
  add_common(c_vc);

  // CLI11's vector overload consumes arguments back to front
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    CliResult r;
    r.exit_code = 2;
    std::ostringstream os;
    os << "usage error: " << e.what() << "\n";
    r.output = os.str();
    return r;
  }

  CliResult res;
  try {
    if (c_root->parsed()) res.exit_code = cmd_rootsys(ctx, sys);
    else if (c_com->parsed()) res.exit_code = cmd_verify_comrel(ctx, spec);
    else if (c_fac->parsed()) res.exit_code = cmd_factor(ctx, spec, element, kind, outpath, count);
    else if (c_thm->parsed()) res.exit_code = cmd_verify_theorem(ctx, spec, exhaustive, sample);
    else if (c_w->parsed()) res.exit_code = cmd_width(ctx, spec, subgroup, strategy, pool, budget);
    else if (c_sl->parsed()) res.exit_code = cmd_sl_factor(ctx, spec, exhaustive, sample);
    else if (c_vc->parsed()) res.exit_code = cmd_verify_cert(ctx, path, expect_group);
  } catch (const Error& e) {
    ctx.out << "error: " << e.what() << "\n";
    res.exit_code = exit_family(static_cast<int>(e.code));
  } catch (const std::exception& e) {
    ctx.out << "error: " << e.what() << "\n";
    res.exit_code = 5;
  }
  res.output = ctx.out.str();
  return res;
}

}  // namespace classprod
