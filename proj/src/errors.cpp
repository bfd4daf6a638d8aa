#include "rvdom/errors.hpp"

namespace rvdom {

const char* errc_name(errc c) {
  switch (c) {
    case errc::element_domain_mismatch: return "ElementDomainMismatch";
    case errc::division_by_interval_containing_zero: return "DivisionByIntervalContainingZero";
    case errc::domain_violation: return "DomainViolation";
    case errc::kind_mismatch: return "KindMismatch";
    case errc::unsupported: return "Unsupported";
    case errc::chain_not_increasing: return "ChainNotIncreasing";
    case errc::degenerate_conditioning: return "DegenerateConditioning";
    case errc::unbounded_join: return "UnboundedJoin";
    case errc::precondition_failed: return "PreconditionFailed";
    case errc::missing_mapping: return "MissingMapping";
    case errc::non_monotone_map: return "NonMonotoneMap";
    case errc::pick_outside_interval: return "PickOutsideInterval";
    case errc::missing_grid_value: return "MissingGridValue";
    case errc::ill_formed_functional: return "IllFormedFunctional";
    case errc::not_psd: return "NotPSD";
    case errc::bad_alpha: return "BadAlpha";
    case errc::bad_probability: return "BadProbability";
    case errc::syntax_error: return "SyntaxError";
    case errc::type_error: return "TypeError";
    case errc::stuck: return "Stuck";
    case errc::fuel_exhausted: return "FuelExhausted";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::bad_digit: return "BadDigit";
    case errc::misaligned: return "Misaligned";
    case errc::depth_overflow: return "DepthOverflow";
    case errc::not_equivalent: return "NotEquivalent";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::space_mismatch: return "SpaceMismatch";
    case errc::point_outside_space: return "PointOutsideSpace";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace rvdom
