#ifndef RAMAN_ERRORS_HPP
#define RAMAN_ERRORS_HPP

#include <stdexcept>

namespace raman {

// User-supplied settings are inconsistent (bad config document, pulse gaps
// shorter than the settling window, ...). The CLI maps this to exit code 2;
// every other failure exits 1.
struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace raman

#endif  // RAMAN_ERRORS_HPP
