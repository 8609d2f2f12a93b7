#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace impact {

// All library failures throw Error. `code` is a stable, module-qualified
// identifier ("dataset.MissingFile", "trainer.DivergenceDetected") that the
// CLI prints in its single-line error output and tests match against.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace impact
