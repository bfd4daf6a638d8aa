#pragma once

#include <stdexcept>
#include <string>

namespace rvdom {

enum class errc {
  element_domain_mismatch,
  division_by_interval_containing_zero,
  domain_violation,
  kind_mismatch,
  unsupported,
  chain_not_increasing,
  degenerate_conditioning,
  unbounded_join,
  precondition_failed,
  missing_mapping,
  non_monotone_map,
  pick_outside_interval,
  missing_grid_value,
  ill_formed_functional,
  not_psd,
  bad_alpha,
  bad_probability,
  syntax_error,
  type_error,
  stuck,
  fuel_exhausted,
  length_mismatch,
  bad_digit,
  misaligned,
  depth_overflow,
  not_equivalent,
  domain_mismatch,
  space_mismatch,
  point_outside_space,
  parse_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace rvdom
