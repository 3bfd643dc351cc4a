#pragma once

#include <stdexcept>
#include <string>

namespace afc {

// A parameter outside an operation's domain. `field` names the offending
// parameter so front ends can map it back to a configuration key.
class DomainError : public std::invalid_argument {
public:
    DomainError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A numerical procedure that could not deliver a trustworthy result
// (no echo found, resonance not resolved, integrator failure, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing files failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Result of a formula evaluated outside its stated regime of validity.
// The value is still computed; `valid` is false and `note` says why.
struct Validity {
    bool valid = true;
    std::string note;

    void flag(std::string why) {
        valid = false;
        if (!note.empty()) note += "; ";
        note += std::move(why);
    }
};

template <typename T>
struct Flagged {
    T value{};
    Validity validity;
};

} // namespace afc
