// SPDX-License-Identifier: Apache-2.0
#ifndef GQF_ERRORS_HPP
#define GQF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gqf {

/// Error categories used by the CLI to pick exit codes.
enum class ErrorClass {
    Validation,  ///< bad inputs: non-physical states, domain violations
    Numerical,   ///< breakdown inside an otherwise valid computation
};

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail),
          error_class_(cls),
          code_(std::move(code)) {}

    ErrorClass error_class() const { return error_class_; }
    const std::string& code() const { return code_; }

  private:
    ErrorClass error_class_;
    std::string code_;
};

inline Error validation_error(const std::string& code, const std::string& detail) {
    return Error(ErrorClass::Validation, code, detail);
}

inline Error numerical_error(const std::string& code, const std::string& detail) {
    return Error(ErrorClass::Numerical, code, detail);
}

}  // namespace gqf

#endif
