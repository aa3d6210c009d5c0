#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opsumm {

struct GenerationRequest {
    std::string system_prompt;
    std::string user_prompt;  // must be non-empty
    double temperature = 0.8;
    int max_tokens = 512;
    std::string model;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    // Returns non-empty completion text or throws BackendError /
    // PreconditionError. Never truncates silently.
    virtual std::string generate(const GenerationRequest& request) = 0;
    virtual std::string name() const = 0;
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    // One vector per input text; all vectors share dimension().
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
    virtual std::size_t dimension() const = 0;
};

struct BackendConfig {
    std::string base_url;
    std::optional<std::string> api_key;
    double timeout_seconds = 30.0;
    int max_retries = 3;
    std::size_t context_limit_tokens = 8192;
    std::string model;
    // Exponential backoff base; tests shrink it. Schedule: base, 2x, 4x, ...
    int retry_base_delay_ms = 1000;
};

// dot(u,v) / (|u| |v|); throws PreconditionError on dimension mismatch or a
// zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

// --- HTTP clients (OpenAI-compatible wire protocol) --------------------------

// POST {base_url}/v1/chat/completions; reads choices[0].message.content.
// Retries transport errors and 5xx with exponential backoff; 4xx and empty
// completions are fatal. The prompt is pre-checked against
// context_limit_tokens (corpus token counter) before any network call.
class HttpGenerationBackend : public GenerationBackend {
public:
    HttpGenerationBackend(BackendConfig config, std::string name);
    std::string generate(const GenerationRequest& request) override;
    std::string name() const override { return name_; }
    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    std::string name_;
};

// POST {base_url}/v1/embeddings; reads data[i].embedding.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    HttpEmbeddingBackend(BackendConfig config, std::size_t dimension);
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dimension_; }

private:
    BackendConfig config_;
    std::size_t dimension_;
};

// --- deterministic test doubles ----------------------------------------------

struct ScriptEntry {
    std::string pattern;   // substring matched against the user prompt
    std::string response;
};

// Replays canned responses: first entry whose pattern occurs in the user
// prompt wins; with no match, echoes the first 50 tokens of the prompt.
// Every request lands in an inspectable, internally synchronized call log.
class ScriptedBackend : public GenerationBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptEntry> script = {}, std::string name = "mock");
    ScriptedBackend(std::initializer_list<ScriptEntry> script)
        : ScriptedBackend(std::vector<ScriptEntry>(script)) {}
    static ScriptedBackend from_file(const std::string& path);
    // heap-allocating variant; ScriptedBackend itself is immovable (mutex)
    static std::unique_ptr<ScriptedBackend> from_file_owned(const std::string& path);

    std::string generate(const GenerationRequest& request) override;
    std::string name() const override { return name_; }

    std::vector<GenerationRequest> calls() const;
    std::size_t call_count() const;
    void clear_calls();

private:
    std::vector<ScriptEntry> script_;
    std::string name_;
    mutable std::mutex mutex_;
    std::vector<GenerationRequest> log_;
};

// Unit-norm bag-of-tokens embeddings. A token's vector is a pseudo-random
// unit vector seeded by fnv1a64 of its canonical form (synonym table applied
// first), so identical canonical token multisets embed identically on every
// platform.
class HashEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HashEmbeddingBackend(std::size_t dimension = 64,
                                  std::map<std::string, std::string> synonyms = {});
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::size_t dimension() const override { return dimension_; }

    std::vector<double> embed_one(const std::string& text) const;

private:
    std::vector<double> token_vector(const std::string& token) const;

    std::size_t dimension_;
    std::map<std::string, std::string> synonyms_;
};

}  // namespace opsumm
