#include "qubonet/remote.hpp"

#include <cmath>
#include <cstdlib>
#include <httplib.h>
#include <iostream>
#include <json.hpp>
#include <thread>

namespace qubonet {

using nlohmann::json;

namespace {

struct Url {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("QUBONET_ENDPOINT: expected an http(s) URL, got '" +
                      endpoint + "'");
  }
  const std::string scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("QUBONET_ENDPOINT: unsupported scheme '" + scheme + "'");
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  Url u;
  u.base = endpoint.substr(0, path_start);
  u.path = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  if (u.base.size() <= scheme_end + 3) {
    throw ConfigError("QUBONET_ENDPOINT: missing host");
  }
  return u;
}

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  std::string s(body.substr(0, kMax));
  if (body.size() > kMax) s += "...";
  return s;
}

void default_warn(const std::string& msg) {
  std::clog << "warning: " << msg << '\n';
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  RemoteConfig c;
  const char* ep = std::getenv("QUBONET_ENDPOINT");
  if (!ep || !*ep) {
    throw ConfigError("QUBONET_ENDPOINT is not set; the remote solver needs it");
  }
  const char* tok = std::getenv("QUBONET_TOKEN");
  if (!tok || !*tok) {
    throw ConfigError("QUBONET_TOKEN is not set; the remote solver needs it");
  }
  c.endpoint = ep;
  c.token = tok;
  c.validate();
  return c;
}

void RemoteConfig::validate() const {
  split_url(endpoint);
  if (token.empty()) throw ConfigError("remote token is empty");
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
}

std::string remote_request_body(const QuboModel& model,
                                const SamplerConfig& config) {
  json linear = json::array(), quadratic = json::array();
  for (std::size_t i = 0; i < model.n_vars; ++i) {
    if (model.linear[i] != 0.0) linear.push_back({i, model.linear[i]});
  }
  for (const auto& [ij, c] : model.quadratic) {
    quadratic.push_back({ij.first, ij.second, c});
  }
  const AnnealSchedule sched = config.schedule.value_or(AnnealSchedule::paused());
  json points = json::array();
  for (const auto& [t, s] : sched.points) points.push_back({t, s});
  json doc = {{"qubo",
               {{"n_vars", model.n_vars},
                {"offset", model.offset},
                {"linear", linear},
                {"quadratic", quadratic}}},
              {"num_reads", config.num_reads},
              {"schedule", {{"points", points}, {"s_q", sched.s_q}}}};
  return doc.dump();
}

std::vector<Sample> parse_remote_response(std::string_view body,
                                          const QuboModel& model,
                                          const RemoteWarningSink& warn) {
  const RemoteWarningSink& sink = warn ? warn : RemoteWarningSink(default_warn);
  auto fail = [&](const std::string& why) -> RemoteParseError {
    return RemoteParseError("malformed sampler response (" + why +
                                "): " + excerpt(body),
                            1);
  };
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw fail("not JSON");
  }
  if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
    throw fail("missing 'samples' array");
  }
  std::vector<Sample> out;
  for (std::size_t k = 0; k < doc["samples"].size(); ++k) {
    const auto& s = doc["samples"][k];
    const std::string where = "sample " + std::to_string(k);
    if (!s.is_object() || !s.contains("assignment") ||
        !s["assignment"].is_array()) {
      throw fail(where + " has no assignment");
    }
    Sample smp;
    for (const auto& bit : s["assignment"]) {
      if (!bit.is_number_integer() || (bit.get<int>() != 0 && bit.get<int>() != 1)) {
        throw fail(where + " has a non-binary value");
      }
      smp.assignment.push_back(static_cast<std::uint8_t>(bit.get<int>()));
    }
    if (smp.assignment.size() != model.n_vars) {
      throw fail(where + " has " + std::to_string(smp.assignment.size()) +
                 " values, model has " + std::to_string(model.n_vars));
    }
    if (s.contains("occurrences")) {
      if (!s["occurrences"].is_number_unsigned() ||
          s["occurrences"].get<std::uint64_t>() == 0) {
        throw fail(where + " has bad occurrences");
      }
      smp.occurrences = s["occurrences"].get<std::uint64_t>();
    }
    smp.energy = model.energy(smp.assignment);
    if (s.contains("energy")) {
      if (!s["energy"].is_number()) throw fail(where + " has a non-numeric energy");
      const double reported = s["energy"].get<double>();
      if (!(std::abs(reported - smp.energy) <= 1e-6)) {
        sink(where + ": reported energy " + std::to_string(reported) +
             " differs from local " + std::to_string(smp.energy) +
             "; keeping the local value");
      }
    }
    out.push_back(std::move(smp));
  }
  if (out.empty()) throw fail("no samples");
  return out;
}

std::vector<Sample> remote_sample(const QuboModel& model,
                                  const SamplerConfig& config,
                                  const RemoteConfig& remote,
                                  const RemoteWarningSink& warn) {
  remote.validate();
  if (config.num_reads < 1) throw InvalidArgument("num_reads must be >= 1");
  const Url url = split_url(remote.endpoint);
  const std::string body = remote_request_body(model, config);

  httplib::Client client(url.base);
  client.set_connection_timeout(remote.timeout);
  client.set_read_timeout(remote.timeout);
  client.set_write_timeout(remote.timeout);
  const httplib::Headers headers{{"Authorization", "Bearer " + remote.token}};

  std::string last_error;
  const int attempts = remote.max_retries + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(remote.base_delay * (1 << (attempt - 2)));
    }
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw RemoteAuthError("sampler rejected the token (HTTP " +
                                std::to_string(res->status) + ")",
                            attempt);
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw RemoteError("sampler returned HTTP " + std::to_string(res->status) +
                            ": " + excerpt(res->body),
                        attempt);
    }
    try {
      return parse_remote_response(res->body, model, warn);
    } catch (const RemoteParseError& e) {
      throw RemoteParseError(e.what(), attempt);
    }
  }
  throw RemoteError("remote sampler failed after " +
                        std::to_string(remote.max_retries) +
                        " retries: " + last_error,
                    attempts);
}

}  // namespace qubonet
