#pragma once

#include <stdexcept>
#include <string>

namespace solarpot {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SOLARPOT_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

SOLARPOT_DEFINE_ERROR(GeometryError);     // invalid or degenerate geometry
SOLARPOT_DEFINE_ERROR(ArgumentError);     // caller passed an out-of-contract value
SOLARPOT_DEFINE_ERROR(StateError);        // operation invoked on an incomplete entity
SOLARPOT_DEFINE_ERROR(TrainingError);     // model fitting cannot proceed
SOLARPOT_DEFINE_ERROR(SchemaError);       // feature property missing or mistyped
SOLARPOT_DEFINE_ERROR(ReferentialError);  // dangling cross-reference between layers
SOLARPOT_DEFINE_ERROR(ContinuityError);   // weather series gap or duplicate
SOLARPOT_DEFINE_ERROR(RangeError);        // physical value outside its range
SOLARPOT_DEFINE_ERROR(FormatError);       // malformed file
SOLARPOT_DEFINE_ERROR(OutOfBoundsError);  // query outside a raster
SOLARPOT_DEFINE_ERROR(InputError);        // missing file or bad configuration

#undef SOLARPOT_DEFINE_ERROR

}  // namespace solarpot
