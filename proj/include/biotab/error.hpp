#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biotab {

/// Failures caused by bad input data. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad argument, not bad data).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FileNotFound : public DataError {
public:
    explicit FileNotFound(const std::string& path)
        : DataError("file not found: " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class MalformedRecord : public DataError {
public:
    MalformedRecord(std::size_t line, const std::string& reason)
        : DataError("line " + std::to_string(line) + ": " + reason),
          line_(line), reason_(reason) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

class DuplicateTableId : public DataError {
public:
    explicit DuplicateTableId(const std::string& id)
        : DataError("duplicate table id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class EmptyResult : public DataError {
public:
    using DataError::DataError;
};

class DegeneratePartition : public DataError {
public:
    using DataError::DataError;
};

class NoTemplateMatch : public DataError {
public:
    explicit NoTemplateMatch(const std::string& question)
        : DataError("no template matches question: " + question) {}
};

class NoExemplarAvailable : public DataError {
public:
    explicit NoExemplarAvailable(int task_id)
        : DataError("no exemplar available for task " + std::to_string(task_id)) {}
};

class InvalidDonor : public DataError {
public:
    InvalidDonor(int task_id, int donor)
        : DataError("invalid donor task " + std::to_string(donor) + " for task " +
                    std::to_string(task_id)) {}
};

class UnknownInstanceId : public DataError {
public:
    explicit UnknownInstanceId(const std::string& id)
        : DataError("prediction references unknown instance id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class DuplicatePrediction : public DataError {
public:
    explicit DuplicatePrediction(const std::string& id)
        : DataError("duplicate prediction for instance id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

}  // namespace biotab
