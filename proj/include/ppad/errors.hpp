#pragma once

#include <stdexcept>
#include <string>

namespace ppad {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileNotFound : public Error      { public: using Error::Error; };
class UnsupportedFormat : public Error { public: using Error::Error; };
class ZeroDimension : public Error     { public: using Error::Error; };
class IoError : public Error           { public: using Error::Error; };

class RegionTooSmall : public Error    { public: using Error::Error; };
class DegenerateField : public Error   { public: using Error::Error; };
class DegenerateInput : public Error   { public: using Error::Error; };
class EmptyInterior : public Error     { public: using Error::Error; };
class GenerationFailed : public Error  { public: using Error::Error; };

class EmptyMask : public Error         { public: using Error::Error; };
class InvalidWeight : public Error     { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

class UnknownWord : public Error       { public: using Error::Error; };
class EmptyInput : public Error        { public: using Error::Error; };

class NotEnoughImages : public Error   { public: using Error::Error; };
class SingleClassInput : public Error  { public: using Error::Error; };
class ConfigError : public Error       { public: using Error::Error; };

} // namespace ppad
