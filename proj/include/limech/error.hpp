#pragma once

#include <stdexcept>
#include <string>

namespace limech {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes, so additions here need a mapping there too.
enum class errc {
  too_few_datasets,
  too_few_values,
  duplicate_label,
  self_loop,
  disconnected_graph,
  index_out_of_range,
  not_stochastic,
  alphabet_mismatch,
  size_limit_exceeded,
  infeasible,
  unbounded,
  bad_alpha,
  missing_edge,
  bad_step,
  domain_error,
  not_in_region,
  parse_error,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace limech
