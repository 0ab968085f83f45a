/*
 * Copyright 2026 The FALE Plots Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FALE_ERROR_HPP_
#define FALE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fale {

// Exit codes of the command line tool. Library errors carry the code they
// map to so the CLI can translate without a taxonomy of catch clauses.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitOracle = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

// Invalid flag combinations, malformed specs, feature == protected, ...
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(kExitConfig, what) {}
};

// CSV/schema parse failures, empty groups, non-binary targets, ...
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(kExitData, what) {}
};

// Model scoring failures: spawn errors, protocol violations, bad scores.
class OracleError : public Error {
 public:
  explicit OracleError(const std::string& what) : Error(kExitOracle, what) {}
};

}  // namespace fale

#endif  // FALE_ERROR_HPP_
