// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sctest::models
{
/// A text-completion backend. Calls block; errors surface as Error(ModelError).
class ModelClient
{
public:
    virtual ~ModelClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string describe() const = 0;
};

/// Scenario key of a prompt: 16 hex digits of the keccak-256 of its first line.
std::string scenario_key(std::string_view prompt);

/// Scripted responses. A prompt is looked up by scenario_key, then by its literal first
/// line, then in the "*" list; the i-th lookup under a key returns the i-th response.
class StubClient final : public ModelClient
{
public:
    explicit StubClient(std::map<std::string, std::vector<std::string>> scenario, std::string origin = "inline");
    /// JSON object of string arrays. Throws Error(SchemaError) on other shapes.
    static StubClient from_json(std::string_view text, std::string origin = "inline");
    static StubClient from_file(const std::filesystem::path& path);

    std::string complete(const std::string& prompt) override;
    std::string describe() const override { return "stub:" + origin_; }

    size_t calls() const noexcept { return calls_; }
    /// Every prompt received, in order.
    const std::vector<std::string>& prompts() const noexcept { return prompts_; }

private:
    std::map<std::string, std::vector<std::string>> scenario_;
    std::map<std::string, size_t> next_;
    std::string origin_;
    size_t calls_ = 0;
    std::vector<std::string> prompts_;
};

struct HttpConfig
{
    std::string endpoint;  ///< http://host[:port]/path
    std::string model;
    double temperature = 0.0;
    int timeout_s = 60;
    std::string api_key_env = "MODEL_API_KEY";
};

/// {"endpoint": ..., "model": ..., "temperature": ..., "timeout_s": ..., "api_key_env": ...}
HttpConfig http_config_from_json(std::string_view text);

/// Chat-completion style backend: one user message in, the first choice's text out.
class HttpClient final : public ModelClient
{
public:
    explicit HttpClient(HttpConfig config);
    std::string complete(const std::string& prompt) override;
    std::string describe() const override { return "http:" + config_.endpoint; }

private:
    HttpConfig config_;
    std::string scheme_host_;
    std::string path_;
};

/// "heuristic" gives nullptr; "stub:<file>" and "http:<config file>" build clients.
/// Throws Error(InvalidConfig) on anything else.
std::unique_ptr<ModelClient> make_client(std::string_view spec);

}  // namespace sctest::models
