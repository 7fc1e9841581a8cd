#pragma once

#include <stdexcept>
#include <string>

namespace dolq {

// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- expression layer ---
class ParseError : public Error { using Error::Error; };
class UnknownSymbol : public ParseError { using ParseError::ParseError; };
class VariableOutOfRange : public ParseError { using ParseError::ParseError; };
class ForbiddenPlaceholder : public ParseError { using ParseError::ParseError; };
class TermCapExceeded : public Error { using Error::Error; };
class ParamLengthMismatch : public Error { using Error::Error; };

// --- dynamics layer ---
class UnknownSystem : public Error { using Error::Error; };
class NonFiniteState : public Error { using Error::Error; };
class TooFewPoints : public Error { using Error::Error; };

// --- optimizer layer ---
class DimensionOutOfRange : public Error { using Error::Error; };
class AllStrategiesFailed : public Error { using Error::Error; };

// --- agent layer ---
class MalformedResponse : public Error { using Error::Error; };
class TransportError : public Error { using Error::Error; };
class BudgetExceeded : public Error { using Error::Error; };
class ScriptExhausted : public Error { using Error::Error; };

// --- orchestrator layer ---
class NoValidHypothesis : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

}  // namespace dolq
