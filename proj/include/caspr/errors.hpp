// Copyright 2026 The Caspr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace caspr {

/// Root of the error hierarchy. The category drives the CLI exit code:
/// Usage -> 1, Program -> 2, Inference -> 3.
class Error : public std::runtime_error {
public:
    enum class Category { Usage, Program, Inference };

    Error(Category category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    Category category() const { return category_; }

private:
    Category category_;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& message)
        : Error(Category::Program,
                "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

class ProbabilityRangeError : public Error {
public:
    ProbabilityRangeError(int line, int col, double value)
        : Error(Category::Program,
                "probability " + std::to_string(value) + " at " + std::to_string(line) + ":" +
                    std::to_string(col) + " is outside [0,1]") {}
};

class DuplicateAtomError : public Error {
public:
    explicit DuplicateAtomError(const std::string& atom)
        : Error(Category::Program, "atom '" + atom + "' appears twice in the same query section") {}
};

class DisjunctionSumError : public Error {
public:
    explicit DisjunctionSumError(const std::string& detail)
        : Error(Category::Program, "annotated disjunction: " + detail) {}
};

class DuplicateProbFactError : public Error {
public:
    explicit DuplicateProbFactError(const std::string& atom)
        : Error(Category::Program, "probabilistic fact atom '" + atom + "' declared more than once") {}
};

class DisjointConditionError : public Error {
public:
    explicit DisjointConditionError(const std::string& detail)
        : Error(Category::Program, "disjoint condition violated: " + detail) {}
};

class UnsafeRuleError : public Error {
public:
    UnsafeRuleError(const std::string& rule, const std::string& variable)
        : Error(Category::Program,
                "unsafe rule: variable " + variable +
                    " does not occur in a positive body atom in '" + rule + "'") {}
};

class ComparisonTypeError : public Error {
public:
    explicit ComparisonTypeError(const std::string& detail)
        : Error(Category::Program, "comparison type error: " + detail) {}
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& detail)
        : Error(Category::Program, "size limit exceeded: " + detail) {}
};

class CapExceededError : public Error {
public:
    CapExceededError(std::size_t facts, std::size_t cap)
        : Error(Category::Program,
                "exact inference over " + std::to_string(facts) + " probabilistic facts exceeds the cap of " +
                    std::to_string(cap) + " (2^n total choices); use approximate mode (--mode approx)") {}
};

class InconsistencyError : public Error {
public:
    explicit InconsistencyError(const std::string& total_choice)
        : Error(Category::Inference,
                "program is inconsistent: total choice {" + total_choice + "} admits no answer set"),
          total_choice_(total_choice) {}

    const std::string& total_choice() const { return total_choice_; }

private:
    std::string total_choice_;
};

class ZeroEvidenceError : public Error {
public:
    explicit ZeroEvidenceError(const std::string& query)
        : Error(Category::Inference,
                "query '" + query + "': evidence has zero measure, bounds are undefined") {}
};

class BenchSpecError : public Error {
public:
    explicit BenchSpecError(const std::string& detail)
        : Error(Category::Usage, "invalid benchmark spec: " + detail) {}
};

}  // namespace caspr
