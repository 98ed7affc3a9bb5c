#pragma once

// Client for a remote annealing service.
//
// Request (HTTP POST, JSON):
//   {"qubo": {"n_vars", "offset", "linear": [[i, h]...],
//             "quadratic": [[i, j, J]...]},
//    "num_reads": n,
//    "schedule": {"points": [[t_us, s]...], "s_q": s}}
// Response:
//   {"samples": [{"assignment": [0|1...], "energy": e, "occurrences": k}...]}

#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qubonet/error.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

class RemoteError : public SolverError {
 public:
  RemoteError(const std::string& what, int attempts)
      : SolverError(what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

// HTTP 401/403. Never retried.
class RemoteAuthError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

// Response body that does not follow the protocol. Carries an excerpt.
class RemoteParseError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

struct RemoteConfig {
  std::string endpoint;  // http(s)://host[:port][/path]
  std::string token;
  int max_retries = 3;
  std::chrono::milliseconds base_delay{250};
  std::chrono::seconds timeout{60};

  // Reads QUBONET_ENDPOINT and QUBONET_TOKEN. Throws ConfigError when either
  // is missing or the endpoint is not an http(s) URL.
  static RemoteConfig from_env();
  void validate() const;
};

using RemoteWarningSink = std::function<void(const std::string&)>;

std::string remote_request_body(const QuboModel& model,
                                const SamplerConfig& config);

// Parses a response and recomputes every energy from `model`. Reported
// energies off by more than 1e-6 produce a warning; the local value is kept.
std::vector<Sample> parse_remote_response(std::string_view body,
                                          const QuboModel& model,
                                          const RemoteWarningSink& warn = {});

// Transport errors and 5xx responses are retried max_retries times with
// exponential backoff starting at base_delay.
std::vector<Sample> remote_sample(const QuboModel& model,
                                  const SamplerConfig& config,
                                  const RemoteConfig& remote,
                                  const RemoteWarningSink& warn = {});

}  // namespace qubonet
