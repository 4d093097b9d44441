#ifndef PROJLAT_ERRORS_HPP
#define PROJLAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace projlat {

// Error categories map onto the CLI exit-code contract:
//   invalid_input        -> 2
//   invariant_violation  -> 3
//   capacity / budget    -> 4
enum class errc {
    invalid_input,
    invariant_violation,
    capacity,
    budget,
};

class Error : public std::runtime_error {
  public:
    Error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case errc::invalid_input: return 2;
            case errc::invariant_violation: return 3;
            case errc::capacity:
            case errc::budget: return 4;
        }
        return 1;
    }

  private:
    errc kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
    throw Error(errc::invalid_input, msg);
}
[[noreturn]] inline void throw_invariant(const std::string& msg) {
    throw Error(errc::invariant_violation, msg);
}
[[noreturn]] inline void throw_capacity(const std::string& msg) {
    throw Error(errc::capacity, msg);
}
[[noreturn]] inline void throw_budget(const std::string& msg) {
    throw Error(errc::budget, msg);
}

}  // namespace projlat

#endif
