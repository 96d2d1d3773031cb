#ifndef M2C_ERRORS_HPP
#define M2C_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace m2c {

// Coarse failure categories, mapped to process exit codes by the CLI.
enum class ErrorClass {
    Io = 1,         // OS-level I/O failure (open/read/write)
    Validation = 2, // malformed or inconsistent input
    Internal = 3,   // broken internal invariant
};

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorClass cls, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)), class_(cls) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorClass error_class() const noexcept { return class_; }

private:
    std::string kind_;
    ErrorClass class_;
};

#define M2C_DEFINE_ERROR(Name, Cls)                                     \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& msg)                           \
            : Error(#Name, ErrorClass::Cls, msg) {}                     \
    }

// geometry / meshes
M2C_DEFINE_ERROR(EmptyMesh, Validation);

// obj parsing
M2C_DEFINE_ERROR(ParseError, Validation);
M2C_DEFINE_ERROR(IndexOutOfRange, Validation);

// scene assembly
M2C_DEFINE_ERROR(UnmatchedObject, Validation);
M2C_DEFINE_ERROR(AmbiguousObject, Validation);
M2C_DEFINE_ERROR(ClassUnknown, Validation);

// cloud files
M2C_DEFINE_ERROR(BadMagic, Validation);
M2C_DEFINE_ERROR(BadVersion, Validation);
M2C_DEFINE_ERROR(TruncatedFile, Validation);
M2C_DEFINE_ERROR(IntensityOutOfRange, Validation);
M2C_DEFINE_ERROR(LabelOutOfRange, Validation);
M2C_DEFINE_ERROR(IoError, Io);

// taxonomy / labeling
M2C_DEFINE_ERROR(UnlabeledPoint, Validation);
M2C_DEFINE_ERROR(TaxonomyMismatch, Validation);

// metrics
M2C_DEFINE_ERROR(LengthMismatch, Validation);
M2C_DEFINE_ERROR(EmptyMatrix, Validation);
M2C_DEFINE_ERROR(ZeroTotal, Validation);

// scene generation
M2C_DEFINE_ERROR(OverlapError, Validation);

#undef M2C_DEFINE_ERROR

} // namespace m2c

#endif
