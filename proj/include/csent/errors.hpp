#pragma once

#include <stdexcept>
#include <string>

namespace csent {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct LabelError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotPsdError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct InstrumentError : Error { using Error::Error; };
struct ClassicalityError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace csent
