#ifndef ECTBA_ERRORS_HPP
#define ECTBA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ectba {

// Numerical failures (pole proximity, non-convergence, bad parameters).
// CLI maps these to exit code 2.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

class pole_proximity_error : public numeric_error {
public:
    explicit pole_proximity_error(const std::string& what) : numeric_error(what) {}
};

class convergence_error : public numeric_error {
public:
    explicit convergence_error(const std::string& what) : numeric_error(what) {}
};

} // namespace ectba

#endif
