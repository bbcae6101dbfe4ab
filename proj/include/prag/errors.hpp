#pragma once

#include <stdexcept>
#include <string>

namespace prag {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DuplicateIdError : public Error {
  public:
    using Error::Error;
};

class EmptyDocumentError : public Error {
  public:
    using Error::Error;
};

class InvalidChunkConfigError : public Error {
  public:
    using Error::Error;
};

class EmptyCorpusError : public Error {
  public:
    using Error::Error;
};

class EmptyIndexError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

class ZeroVectorError : public Error {
  public:
    using Error::Error;
};

class RemoteServiceError : public Error {
  public:
    using Error::Error;
};

class EmptyCandidatesError : public Error {
  public:
    using Error::Error;
};

class MalformedTableError : public Error {
  public:
    using Error::Error;
};

class NoRetrievedContentError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class MissingFieldError : public Error {
  public:
    MissingFieldError(std::size_t line, const std::string& field)
        : Error("line " + std::to_string(line) + ": missing or empty field '" + field + "'"),
          line_(line),
          field_(field) {}
    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

  private:
    std::size_t line_;
    std::string field_;
};

}  // namespace prag
