// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/common/error.hpp>
#include <sctest/models/client.hpp>

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sctest::models
{
namespace
{
std::string first_line(std::string_view text)
{
    const auto nl = text.find('\n');
    return std::string{nl == std::string_view::npos ? text : text.substr(0, nl)};
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}
}  // namespace

std::string scenario_key(std::string_view prompt)
{
    const auto digest = bytecode::keccak256(std::string_view{first_line(prompt)});
    return to_hex(BytesView{digest.data(), 8}, false);
}

StubClient::StubClient(std::map<std::string, std::vector<std::string>> scenario, std::string origin)
  : scenario_{std::move(scenario)}, origin_{std::move(origin)}
{}

StubClient StubClient::from_json(std::string_view text, std::string origin)
{
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorCode::SchemaError, "stub scenario must be a JSON object");
    std::map<std::string, std::vector<std::string>> scenario;
    for (const auto& [key, list] : doc.items())
    {
        if (!list.is_array())
            throw Error(ErrorCode::SchemaError, "stub scenario entry '" + key + "' must be an array of strings");
        auto& out = scenario[key];
        for (const auto& r : list)
        {
            if (!r.is_string())
                throw Error(ErrorCode::SchemaError, "stub scenario entry '" + key + "' must be an array of strings");
            out.push_back(r.get<std::string>());
        }
    }
    return StubClient{std::move(scenario), std::move(origin)};
}

StubClient StubClient::from_file(const std::filesystem::path& path)
{
    return from_json(read_file(path), path.filename().string());
}

std::string StubClient::complete(const std::string& prompt)
{
    ++calls_;
    prompts_.push_back(prompt);
    for (const auto& key : {scenario_key(prompt), first_line(prompt), std::string{"*"}})
    {
        const auto it = scenario_.find(key);
        if (it == scenario_.end())
            continue;
        auto& i = next_[key];
        if (i < it->second.size())
            return it->second[i++];
    }
    throw Error(ErrorCode::ModelError, "stub scenario has no response left for key " + scenario_key(prompt));
}

HttpConfig http_config_from_json(std::string_view text)
{
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("endpoint") || !doc["endpoint"].is_string())
        throw Error(ErrorCode::InvalidConfig, "http model config needs a string \"endpoint\"");
    HttpConfig c;
    c.endpoint = doc["endpoint"].get<std::string>();
    c.model = doc.value("model", std::string{});
    c.temperature = doc.value("temperature", 0.0);
    c.timeout_s = doc.value("timeout_s", 60);
    c.api_key_env = doc.value("api_key_env", std::string{"MODEL_API_KEY"});
    if (c.timeout_s <= 0)
        throw Error(ErrorCode::InvalidConfig, "timeout_s must be positive");
    return c;
}

HttpClient::HttpClient(HttpConfig config) : config_{std::move(config)}
{
    constexpr std::string_view scheme = "http://";
    if (config_.endpoint.rfind(scheme, 0) != 0)
        throw Error(ErrorCode::InvalidConfig, "only http:// endpoints are supported: " + config_.endpoint);
    const auto slash = config_.endpoint.find('/', scheme.size());
    scheme_host_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::string HttpClient::complete(const std::string& prompt)
{
    httplib::Client cli{scheme_host_};
    cli.set_connection_timeout(config_.timeout_s, 0);
    cli.set_read_timeout(config_.timeout_s, 0);
    cli.set_write_timeout(config_.timeout_s, 0);

    nlohmann::json body = {
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string{"Bearer "} + key);

    const auto res = cli.Post(path_, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorCode::ModelError, "request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error(ErrorCode::ModelError, "model endpoint answered HTTP " + std::to_string(res->status));
    const auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorCode::ModelError, "model endpoint returned invalid JSON");
    // Chat-completion shape first, then a bare {"text": ...}.
    if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty())
    {
        const auto& c = doc["choices"][0];
        if (c.contains("message") && c["message"].contains("content") && c["message"]["content"].is_string())
            return c["message"]["content"].get<std::string>();
        if (c.contains("text") && c["text"].is_string())
            return c["text"].get<std::string>();
    }
    if (doc.contains("text") && doc["text"].is_string())
        return doc["text"].get<std::string>();
    throw Error(ErrorCode::ModelError, "model response has no text");
}

std::unique_ptr<ModelClient> make_client(std::string_view spec)
{
    if (spec == "heuristic")
        return nullptr;
    if (spec.rfind("stub:", 0) == 0)
        return std::make_unique<StubClient>(StubClient::from_file(std::string{spec.substr(5)}));
    if (spec.rfind("http:", 0) == 0)
        return std::make_unique<HttpClient>(http_config_from_json(read_file(std::string{spec.substr(5)})));
    throw Error(ErrorCode::InvalidConfig, "model must be heuristic, stub:<file> or http:<config>, got " + std::string{spec});
}

}  // namespace sctest::models
