#include "opsumm/manifest.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "opsumm/errors.hpp"

namespace opsumm {

namespace {
using nlohmann::json;
}

std::string_view to_string(SystemKind s) {
    switch (s) {
        case SystemKind::XlOpsumm: return "xl-opsumm";
        case SystemKind::Incremental: return "incremental";
        case SystemKind::Hierarchical: return "hierarchical";
        case SystemKind::Full: return "full";
    }
    return "xl-opsumm";
}

SystemKind parse_system_kind(std::string_view name) {
    if (name == "xl-opsumm") return SystemKind::XlOpsumm;
    if (name == "incremental") return SystemKind::Incremental;
    if (name == "hierarchical") return SystemKind::Hierarchical;
    if (name == "full") return SystemKind::Full;
    throw PreconditionError("unknown system: " + std::string(name));
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string manifest_to_json(const RunManifest& manifest) {
    json config = {{"tau", manifest.config.tau},
                   {"temperature", manifest.config.temperature},
                   {"word_limit", manifest.config.word_limit},
                   {"cluster_threshold", manifest.config.cluster_threshold},
                   {"dict_top_k", manifest.config.dict_top_k},
                   {"context_limit_tokens", manifest.config.context_limit_tokens},
                   {"max_tokens", manifest.config.max_tokens},
                   {"model", manifest.config.model}};
    json doc = {{"run_id", manifest.run_id},
                {"system", std::string(to_string(manifest.system))},
                {"config", config},
                {"generation_backend", manifest.generation_backend},
                {"embedding_backend", manifest.embedding_backend},
                {"corpus_path", manifest.corpus_path},
                {"started_at", manifest.started_at},
                {"finished_at", manifest.finished_at}};
    return doc.dump(2);
}

RunManifest manifest_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid manifest JSON: ") + e.what());
    }
    RunManifest manifest;
    try {
        manifest.run_id = doc.at("run_id").get<std::string>();
        manifest.system = parse_system_kind(doc.at("system").get<std::string>());
        const auto& config = doc.at("config");
        manifest.config.tau = config.at("tau").get<std::size_t>();
        manifest.config.temperature = config.at("temperature").get<double>();
        manifest.config.word_limit = config.at("word_limit").get<int>();
        manifest.config.cluster_threshold = config.at("cluster_threshold").get<double>();
        manifest.config.dict_top_k = config.at("dict_top_k").get<std::size_t>();
        manifest.config.context_limit_tokens =
            config.at("context_limit_tokens").get<std::size_t>();
        manifest.config.max_tokens = config.at("max_tokens").get<int>();
        manifest.config.model = config.value("model", std::string{});
        manifest.generation_backend = doc.value("generation_backend", std::string{});
        manifest.embedding_backend = doc.value("embedding_backend", std::string{});
        manifest.corpus_path = doc.value("corpus_path", std::string{});
        manifest.started_at = doc.value("started_at", std::string{});
        manifest.finished_at = doc.value("finished_at", std::string{});
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad manifest record: ") + e.what());
    }
    return manifest;
}

}  // namespace opsumm
