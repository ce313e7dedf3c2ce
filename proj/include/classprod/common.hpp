#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace classprod {

// Error taxonomy. Each value maps to a CLI exit-code family (see cli.cpp).
enum class Errc {
  // field
  non_prime,
  odd_degree_involution,
  reducible_modulus,
  division_by_zero,
  no_involution,
  // rootsys
  unsupported_rank,
  root_not_in_system,
  not_a_root,
  // groups
  twist_needs_involution,
  unsupported_type_rank_field,
  param_out_of_subfield,
  constraint_violated,
  bad_arity,
  dimension_mismatch,
  overflow,
  // chevrel
  probe_inconsistent,
  improper_witness,
  no_solution,
  excluded_commutator_pair,
  // decomp
  type_a_unsupported,
  coverage_gap,
  not_in_d,
  level_stall,
  not_in_r0_subgroup,
  not_unipotent_upper,
  not_in_s,
  rank_too_small,
  not_unimodular,
  not_type_d,
  malformed_certificate,
  // width
  realization_mismatch,
  budget_exhausted,
  // cli
  bad_spec,
  schema_mismatch,
  corrupt_document,
  internal,
};

const char* errc_name(Errc e);

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, Errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace classprod
