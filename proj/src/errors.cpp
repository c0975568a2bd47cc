#include "pxc/errors.hpp"

namespace pxc {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MissingColumn: return "MissingColumn";
        case Errc::TimestampParse: return "TimestampParse";
        case Errc::InconsistentCaseAttribute: return "InconsistentCaseAttribute";
        case Errc::PositionOutOfRange: return "PositionOutOfRange";
        case Errc::EmptyResult: return "EmptyResult";
        case Errc::MissingLabel: return "MissingLabel";
        case Errc::SingleClass: return "SingleClass";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::InsufficientPoints: return "InsufficientPoints";
        case Errc::KTooLarge: return "KTooLarge";
        case Errc::WidthMismatch: return "WidthMismatch";
        case Errc::EmptyPrefixLog: return "EmptyPrefixLog";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::VersionMismatch: return "VersionMismatch";
        case Errc::Corrupt: return "Corrupt";
        case Errc::DegenerateSplit: return "DegenerateSplit";
        case Errc::ConfigError: return "ConfigError";
        case Errc::FormulaParse: return "FormulaParse";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::IoFailure: return "IoFailure";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace pxc
