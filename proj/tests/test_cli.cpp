#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "classprod/cert.hpp"
#include "classprod/cli.hpp"

using namespace classprod;

TEST_CASE("rootsys command") {
  auto r = run_cli({"rootsys", "B2"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"positive_roots\"") != std::string::npos);
  CHECK(r.output.find("[0,1]") == std::string::npos);  // compact arrays are multiline
  auto rt = run_cli({"rootsys", "B2", "--format", "table"});
  CHECK(rt.exit_code == 0);
  CHECK(rt.output.find("e1+e2") != std::string::npos);
  CHECK(run_cli({"rootsys", "Q9"}).exit_code == 2);
  CHECK(run_cli({"rootsys", "D3"}).exit_code == 2);
}

TEST_CASE("verify-comrel command") {
  auto r = run_cli({"verify-comrel", "2D3@F2^2"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("proper-pair") != std::string::npos);
  CHECK(r.output.find("\"all_pass\": true") != std::string::npos);
  // the characteristic-2 coincidence group: the lemma's domain (u in Sigma_1)
  // avoids the excluded pairs, so every row must still pass
  auto rb = run_cli({"verify-comrel", "B2@F2"});
  CHECK(rb.exit_code == 0);
  CHECK(rb.output.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("factor accepts an explicit hex element") {
  auto R = build_realization("C2@F3");
  Elem g = root_element(*R, R->rs.positive[2], R->param_at(R->rs.positive[2], 1));
  auto r = run_cli({"factor", "C2@F3", "--element", canon_hex(g), "--kind", "uplus"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"kind\": \"Uplus\"") != std::string::npos);
  // an element outside U+ under the uplus kind is a verification failure
  Elem neg = root_element(*R, -R->rs.positive[2], R->param_at(-R->rs.positive[2], 1));
  CHECK(run_cli({"factor", "C2@F3", "--element", canon_hex(neg), "--kind", "uplus"}).exit_code == 3);
}

TEST_CASE("factor and verify-cert round trip") {
  std::string path = "/tmp/classprod_cert_test.json";
  auto r = run_cli({"factor", "C2@F3", "--element", "random", "--seed", "7", "--out", path});
  CHECK(r.exit_code == 0);
  auto v = run_cli({"verify-cert", path});
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("\"valid\": true") != std::string::npos);
  // load against the wrong group context
  auto w = run_cli({"verify-cert", path, "--group", "B2@F3"});
  CHECK(w.exit_code == 6);
  // corrupt the file
  {
    std::ofstream f(path, std::ios::app);
    f << "garbage";
  }
  CHECK(run_cli({"verify-cert", path}).exit_code == 6);
  std::remove(path.c_str());
}

TEST_CASE("certificate json round trip is lossless") {
  auto R = build_realization("2D3@F2^2");
  Decomposer dec = make_decomposer(R);
  Elem g = emul(root_element(*R, R->rs.positive[1], R->param_at(R->rs.positive[1], 1)),
                root_element(*R, -R->rs.positive[2], R->param_at(-R->rs.positive[2], 1)));
  Certificate c = factor_group(dec, g);
  std::string j1 = certificate_to_json(c);
  Certificate back = certificate_from_json(j1, R->groupspec);
  CHECK(certificate_to_json(back) == j1);
  CHECK(verify_certificate(*R, back, g));
}

TEST_CASE("verify-theorem sampled run and determinism across threads") {
  std::vector<std::string> base = {"verify-theorem", "C2@F3", "--sample", "40", "--seed", "3"};
  auto a = run_cli(base);
  CHECK(a.exit_code == 0);
  CHECK(a.output.find("\"all_certified\": true") != std::string::npos);
  auto b = run_cli(base);
  CHECK(a.output == b.output);
  auto c = run_cli({"verify-theorem", "C2@F3", "--sample", "40", "--seed", "3",
                    "--threads", "2"});
  CHECK(c.output == a.output);
  // different seed gives a different (but valid) report
  auto d = run_cli({"verify-theorem", "C2@F3", "--sample", "40", "--seed", "4"});
  CHECK(d.exit_code == 0);
}

TEST_CASE("sl-factor command") {
  auto r = run_cli({"sl-factor", "A3@F2", "--sample", "60", "--seed", "1"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"all_factored\": true") != std::string::npos);
  CHECK(run_cli({"sl-factor", "C2@F3"}).exit_code == 2);
}

TEST_CASE("width command with the plan strategy") {
  auto r = run_cli({"width", "C2@F3", "--subgroup", "s1", "--strategy", "plan"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"covered\": true") != std::string::npos);
  auto r2 = run_cli({"width", "C2@F3", "--subgroup", "s1", "--strategy", "plan"});
  CHECK(r.output == r2.output);
}

TEST_CASE("usage and spec errors") {
  CHECK(run_cli({"nonsense"}).exit_code == 2);
  CHECK(run_cli({"factor", "Z9@F4"}).exit_code == 2);
  CHECK(run_cli({"factor", "C2@F2"}).exit_code == 2);
  CHECK(run_cli({"verify-theorem", "A3@F2", "--sample", "1"}).exit_code == 2);
}
