#include "opsumm/backends.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "opsumm/corpus.hpp"
#include "opsumm/errors.hpp"
#include "opsumm/hash.hpp"

namespace opsumm {

namespace {

using nlohmann::json;

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

httplib::Client make_client(const BackendConfig& config) {
    httplib::Client client(config.base_url);
    auto seconds = static_cast<time_t>(config.timeout_seconds);
    auto micros =
        static_cast<time_t>((config.timeout_seconds - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    if (config.api_key) client.set_bearer_token_auth(*config.api_key);
    return client;
}

// POST with the shared retry policy: transport failures and 5xx retry with
// exponential backoff, anything else returns immediately.
json post_with_retries(const BackendConfig& config, const std::string& path,
                       const json& body) {
    auto client = make_client(config);
    const std::string payload = body.dump();
    int last_status = 0;
    std::string last_error = "connection failed";
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            auto delay = std::chrono::milliseconds(config.retry_base_delay_ms << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_status = 0;
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_status = res->status;
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status >= 400)
            throw BackendError("request to " + path + " failed with status " +
                                   std::to_string(res->status) + ": " + res->body,
                               res->status, /*retryable=*/false);
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendError(std::string("invalid JSON response: ") + e.what(), res->status);
        }
    }
    throw BackendError("request to " + path + " failed after " +
                           std::to_string(config.max_retries + 1) + " attempts: " + last_error,
                       last_status, /*retryable=*/true);
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw PreconditionError("cosine: dimension mismatch");
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0 || nv == 0) throw PreconditionError("cosine: zero-norm input");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

HttpGenerationBackend::HttpGenerationBackend(BackendConfig config, std::string name)
    : config_(std::move(config)), name_(std::move(name)) {}

std::string HttpGenerationBackend::generate(const GenerationRequest& request) {
    if (request.user_prompt.empty()) throw PreconditionError("user_prompt is empty");
    const std::size_t prompt_tokens =
        count_tokens(request.system_prompt) + count_tokens(request.user_prompt);
    if (prompt_tokens > config_.context_limit_tokens)
        throw PreconditionError("prompt of " + std::to_string(prompt_tokens) +
                                " tokens exceeds context limit of " +
                                std::to_string(config_.context_limit_tokens));

    json messages = json::array();
    if (!request.system_prompt.empty())
        messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    messages.push_back({{"role", "user"}, {"content", request.user_prompt}});
    json body = {{"model", request.model.empty() ? config_.model : request.model},
                 {"messages", messages},
                 {"temperature", request.temperature},
                 {"max_tokens", request.max_tokens}};

    json response = post_with_retries(config_, "/v1/chat/completions", body);
    std::string content;
    try {
        content = response.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed completion response: ") + e.what());
    }
    if (content.empty()) throw BackendError("backend returned an empty completion");
    return content;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(BackendConfig config, std::size_t dimension)
    : config_(std::move(config)), dimension_(dimension) {}

std::vector<std::vector<double>> HttpEmbeddingBackend::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    json body = {{"model", config_.model}, {"input", texts}};
    json response = post_with_retries(config_, "/v1/embeddings", body);
    std::vector<std::vector<double>> vectors;
    try {
        for (const auto& item : response.at("data"))
            vectors.push_back(item.at("embedding").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed embeddings response: ") + e.what());
    }
    if (vectors.size() != texts.size())
        throw BackendError("embeddings response count mismatch: expected " +
                           std::to_string(texts.size()) + ", got " +
                           std::to_string(vectors.size()));
    for (const auto& v : vectors)
        if (v.size() != dimension_)
            throw BackendError("embedding dimension mismatch: expected " +
                               std::to_string(dimension_) + ", got " + std::to_string(v.size()));
    return vectors;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script, std::string name)
    : script_(std::move(script)), name_(std::move(name)) {}

namespace {

std::pair<std::vector<ScriptEntry>, std::string> parse_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open script file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("invalid script file " + path + ": " + e.what());
    }
    std::vector<ScriptEntry> script;
    for (const auto& entry : doc.value("script", json::array()))
        script.push_back({entry.at("pattern").get<std::string>(),
                          entry.at("response").get<std::string>()});
    return {std::move(script), doc.value("name", std::string("mock"))};
}

}  // namespace

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    auto [script, name] = parse_script(path);
    return ScriptedBackend(std::move(script), std::move(name));
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file_owned(const std::string& path) {
    auto [script, name] = parse_script(path);
    return std::make_unique<ScriptedBackend>(std::move(script), std::move(name));
}

std::string ScriptedBackend::generate(const GenerationRequest& request) {
    {
        std::lock_guard lock(mutex_);
        log_.push_back(request);
    }
    for (const auto& entry : script_)
        if (request.user_prompt.find(entry.pattern) != std::string::npos) return entry.response;
    return truncate_to_tokens(request.user_prompt, 50);
}

std::vector<GenerationRequest> ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return log_.size();
}

void ScriptedBackend::clear_calls() {
    std::lock_guard lock(mutex_);
    log_.clear();
}

HashEmbeddingBackend::HashEmbeddingBackend(std::size_t dimension,
                                           std::map<std::string, std::string> synonyms)
    : dimension_(dimension), synonyms_(std::move(synonyms)) {
    if (dimension_ < 2) throw PreconditionError("embedding dimension must be >= 2");
}

std::vector<double> HashEmbeddingBackend::token_vector(const std::string& token) const {
    std::string canonical = lowercase(token);
    if (auto it = synonyms_.find(canonical); it != synonyms_.end()) canonical = it->second;
    std::uint64_t state = fnv1a64(canonical);
    std::vector<double> v(dimension_);
    double norm = 0;
    for (double& x : v) {
        x = 2.0 * splitmix64_unit(state) - 1.0;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm > 0)
        for (double& x : v) x /= norm;
    return v;
}

std::vector<double> HashEmbeddingBackend::embed_one(const std::string& text) const {
    std::vector<double> sum(dimension_, 0.0);
    for (const auto& token : tokenize(text)) {
        auto tv = token_vector(token);
        for (std::size_t i = 0; i < dimension_; ++i) sum[i] += tv[i];
    }
    double norm = 0;
    for (double x : sum) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) {
        // empty or fully cancelled text: a fixed unit vector keeps cosine defined
        sum.assign(dimension_, 0.0);
        sum[0] = 1.0;
        return sum;
    }
    for (double& x : sum) x /= norm;
    return sum;
}

std::vector<std::vector<double>> HashEmbeddingBackend::embed(
    const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(embed_one(text));
    return out;
}

}  // namespace opsumm
