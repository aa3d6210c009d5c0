// opsumm: ingest corpora, run the summarization systems, resume interrupted
// runs, and evaluate outputs against references.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "config_file.hpp"
#include "opsumm/absa.hpp"
#include "opsumm/backends.hpp"
#include "opsumm/baselines.hpp"
#include "opsumm/corpus.hpp"
#include "opsumm/errors.hpp"
#include "opsumm/eval.hpp"
#include "opsumm/hash.hpp"
#include "opsumm/manifest.hpp"
#include "opsumm/summarizer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace opsumm;
using opsumm::cli::ConfigFile;
using opsumm::cli::parse_config_file;

namespace {

// 0 success, 1 backend/runtime failure, 2 input validation, 3 partial failure
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitPartial = 3;

constexpr const char* kApiKeyEnvVar = "OPSUMM_API_KEY";

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// ---- backend selection --------------------------------------------------------

struct ResolvedBackends {
    std::unique_ptr<GenerationBackend> generation;
    std::unique_ptr<EmbeddingBackend> embedding;
    std::string generation_name;
    std::string embedding_name;
    std::size_t context_limit_tokens = 8192;
    std::string model;
    bool deterministic = false;  // mock backends replay fixed scripts
};

// `mock:<script path>` replays a scripted backend offline; any other name
// selects a `[backend.<name>]` config section (OpenAI-compatible endpoint).
ResolvedBackends make_backends(const std::string& spec, const ConfigFile& config) {
    ResolvedBackends resolved;
    if (spec.rfind("mock:", 0) == 0) {
        const std::string path = spec.substr(5);
        if (path.empty()) throw PreconditionError("--backend mock: requires a script path");
        resolved.generation = ScriptedBackend::from_file_owned(path);
        resolved.embedding = std::make_unique<HashEmbeddingBackend>(64);
        resolved.generation_name = "mock:" + fs::path(path).filename().string();
        resolved.embedding_name = "hash-64";
        resolved.deterministic = true;
        return resolved;
    }

    const std::string section = "backend." + spec;
    const auto it = config.find(section);
    if (it == config.end())
        throw PreconditionError("no [" + section + "] section in the config file");
    const auto& keys = it->second;
    auto value = [&](const std::string& key) -> std::string {
        const auto k = keys.find(key);
        return k == keys.end() ? "" : k->second;
    };

    BackendConfig backend;
    backend.base_url = value("base_url");
    if (backend.base_url.empty())
        throw PreconditionError("[" + section + "] is missing base_url");
    backend.model = value("model");
    if (const auto* key = std::getenv(kApiKeyEnvVar)) backend.api_key = key;
    if (const auto v = value("context_limit_tokens"); !v.empty())
        backend.context_limit_tokens = std::stoul(v);
    if (const auto v = value("timeout_seconds"); !v.empty())
        backend.timeout_seconds = std::stod(v);
    if (const auto v = value("max_retries"); !v.empty()) backend.max_retries = std::stoi(v);

    std::size_t dimension = 0;
    if (const auto v = value("embedding_dimension"); !v.empty()) dimension = std::stoul(v);

    resolved.context_limit_tokens = backend.context_limit_tokens;
    resolved.model = backend.model;
    resolved.generation = std::make_unique<HttpGenerationBackend>(backend, spec);
    resolved.generation_name = spec;
    if (dimension > 0) {
        resolved.embedding = std::make_unique<HttpEmbeddingBackend>(backend, dimension);
        resolved.embedding_name = spec + ":embeddings";
    } else {
        resolved.embedding = std::make_unique<HashEmbeddingBackend>(64);
        resolved.embedding_name = "hash-64";
    }
    return resolved;
}

// ---- aspect extraction ----------------------------------------------------------

// Compact compiled-in review lexicon used when no files are supplied.
LexiconExtractor default_extractor() {
    return LexiconExtractor(
        {"battery",  "battery life", "camera",   "screen",  "display",  "price",
         "value",    "quality",      "sound",    "speaker", "shipping", "delivery",
         "size",     "weight",       "design",   "build",   "keyboard", "performance",
         "storage",  "packaging"},
        {{"great", Sentiment::Positive},  {"good", Sentiment::Positive},
         {"excellent", Sentiment::Positive}, {"amazing", Sentiment::Positive},
         {"love", Sentiment::Positive},   {"nice", Sentiment::Positive},
         {"fast", Sentiment::Positive},   {"solid", Sentiment::Positive},
         {"crisp", Sentiment::Positive},  {"perfect", Sentiment::Positive},
         {"bad", Sentiment::Negative},    {"poor", Sentiment::Negative},
         {"terrible", Sentiment::Negative}, {"awful", Sentiment::Negative},
         {"slow", Sentiment::Negative},   {"broken", Sentiment::Negative},
         {"cheap", Sentiment::Negative},  {"noisy", Sentiment::Negative},
         {"disappointing", Sentiment::Negative}, {"flimsy", Sentiment::Negative}},
        3);
}

// ---- shared option bundles -------------------------------------------------------

struct PipelineFlags {
    std::string config_path;
    std::string backend_spec = "mock:";
    std::string system_name = "xl-opsumm";
    std::string format_name = "jsonl";
    std::string out_dir = "out";
    std::string aspect_lexicon;
    std::string polarity_lexicon;
    std::size_t jobs = 1;
    // pipeline overrides; CLI11 counts tell us which were set explicitly
    std::size_t tau = 0;
    double temperature = 0;
    int word_limit = 0;
    double cluster_threshold = 0;
    std::size_t dict_top_k = 0;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
    cmd->add_option("--config", flags.config_path, "config file ([pipeline], [backend.*])");
    cmd->add_option("--backend", flags.backend_spec,
                    "backend name from the config file, or mock:<script path>");
    cmd->add_option("--format", flags.format_name, "corpus format: jsonl | amasum");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--jobs", flags.jobs, "concurrent product pipelines")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", flags.tau, "chunk token budget");
    cmd->add_option("--temperature", flags.temperature, "sampling temperature");
    cmd->add_option("--word-limit", flags.word_limit, "summary word limit");
    cmd->add_option("--cluster-threshold", flags.cluster_threshold,
                    "aspect clustering cosine threshold");
    cmd->add_option("--dict-top-k", flags.dict_top_k, "dictionary lines in update prompts");
    cmd->add_option("--aspect-lexicon", flags.aspect_lexicon, "aspect term list, one per line");
    cmd->add_option("--polarity-lexicon", flags.polarity_lexicon,
                    "word<TAB>positive|negative list");
}

// Precedence: built-in defaults < [pipeline] section < explicit flags.
PipelineConfig resolve_pipeline_config(const CLI::App* cmd, const PipelineFlags& flags,
                                       const ConfigFile& config,
                                       const ResolvedBackends& backends) {
    PipelineConfig resolved;
    resolved.context_limit_tokens = backends.context_limit_tokens;
    resolved.tau = default_tau_for_context(resolved.context_limit_tokens);
    resolved.model = backends.model;

    if (const auto it = config.find("pipeline"); it != config.end()) {
        const auto& keys = it->second;
        auto value = [&](const std::string& key) -> std::string {
            const auto k = keys.find(key);
            return k == keys.end() ? "" : k->second;
        };
        if (const auto v = value("tau"); !v.empty()) resolved.tau = std::stoul(v);
        if (const auto v = value("temperature"); !v.empty())
            resolved.temperature = std::stod(v);
        if (const auto v = value("word_limit"); !v.empty()) resolved.word_limit = std::stoi(v);
        if (const auto v = value("cluster_threshold"); !v.empty())
            resolved.cluster_threshold = std::stod(v);
        if (const auto v = value("dict_top_k"); !v.empty())
            resolved.dict_top_k = std::stoul(v);
        if (const auto v = value("max_tokens"); !v.empty())
            resolved.max_tokens = std::stoi(v);
    }

    if (cmd->count("--tau")) resolved.tau = flags.tau;
    if (cmd->count("--temperature")) resolved.temperature = flags.temperature;
    if (cmd->count("--word-limit")) resolved.word_limit = flags.word_limit;
    if (cmd->count("--cluster-threshold"))
        resolved.cluster_threshold = flags.cluster_threshold;
    if (cmd->count("--dict-top-k")) resolved.dict_top_k = flags.dict_top_k;

    if (resolved.tau == 0) throw PreconditionError("tau must be positive");
    if (resolved.tau >= resolved.context_limit_tokens)
        throw PreconditionError("tau must be below the backend context limit");
    return resolved;
}

LexiconExtractor make_extractor(const PipelineFlags& flags) {
    if (!flags.aspect_lexicon.empty() || !flags.polarity_lexicon.empty()) {
        if (flags.aspect_lexicon.empty() || flags.polarity_lexicon.empty())
            throw PreconditionError(
                "--aspect-lexicon and --polarity-lexicon must be given together");
        return LexiconExtractor::from_files(flags.aspect_lexicon, flags.polarity_lexicon);
    }
    return default_extractor();
}

std::string run_id_for(SystemKind system, const std::string& corpus_path,
                       const PipelineConfig& config) {
    std::uint64_t h = fnv1a64(to_string(system));
    h = fnv1a64(corpus_path, h);
    h = fnv1a64(std::to_string(config.tau), h);
    h = fnv1a64(std::to_string(config.temperature), h);
    h = fnv1a64(std::to_string(config.word_limit), h);
    h = fnv1a64(std::to_string(config.cluster_threshold), h);
    h = fnv1a64(std::to_string(config.dict_top_k), h);
    h = fnv1a64(std::to_string(config.context_limit_tokens), h);
    return hex64(h);
}

// ---- ingest ----------------------------------------------------------------------

int cmd_ingest(const std::string& input, const std::string& format_name,
               const std::string& out_path) {
    const auto corpora = load_reviews(input, parse_corpus_format(format_name));
    if (corpora.empty()) throw PreconditionError("no reviews in " + input);

    const auto stats = corpus_stats(corpora);
    std::printf("Avg. reviews / product   : %10.2f\n", stats.avg_reviews_per_entity);
    std::printf("Avg. sentences / review  : %10.2f\n", stats.avg_sentences_per_review);
    std::printf("Avg. words / sentence    : %10.2f\n", stats.avg_words_per_sentence);

    std::ostringstream reviews_out, refs_out;
    bool any_reference = false;
    for (const auto& corpus : corpora) {
        for (const auto& review : corpus.reviews) {
            json record = {{"id", review.id},
                           {"product_id", review.product_id},
                           {"text", review.text}};
            if (review.rating) record["rating"] = *review.rating;
            if (review.timestamp) record["timestamp"] = *review.timestamp;
            reviews_out << record.dump() << '\n';
        }
        if (corpus.reference_summary) {
            any_reference = true;
            refs_out << json{{"product_id", corpus.product_id},
                             {"reference", *corpus.reference_summary}}
                            .dump()
                     << '\n';
        }
    }
    write_file_atomic(out_path, reviews_out.str());
    if (any_reference) {
        std::string refs_path = out_path;
        if (refs_path.size() > 6 && refs_path.ends_with(".jsonl"))
            refs_path.resize(refs_path.size() - 6);
        refs_path += ".refs.jsonl";
        write_file_atomic(refs_path, refs_out.str());
        std::cout << "references: " << refs_path << "\n";
    }
    std::cout << "reviews: " << out_path << "\n";
    return kExitOk;
}

// ---- summarize / resume ------------------------------------------------------------

struct ProductResult {
    std::string product_id;
    std::string summary;
    std::string error;  // non-empty on failure
};

// Runs `work` over all products on `jobs` threads; results keep corpus order.
std::vector<ProductResult> for_each_product(
    const std::vector<ProductCorpus>& corpora, std::size_t jobs,
    const std::function<std::string(const ProductCorpus&)>& work) {
    std::vector<ProductResult> results(corpora.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= corpora.size()) return;
            results[i].product_id = corpora[i].product_id;
            try {
                results[i].summary = work(corpora[i]);
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < std::min(jobs, corpora.size()); ++t)
            threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }
    return results;
}

int write_run_outputs(const std::vector<ProductResult>& results, SystemKind system,
                      const fs::path& out_dir, RunManifest manifest) {
    std::ostringstream summaries;
    std::size_t failed = 0;
    for (const auto& result : results) {
        if (!result.error.empty()) {
            ++failed;
            std::cerr << "error: product " << result.product_id << ": " << result.error
                      << "\n";
            continue;
        }
        summaries << json{{"system", std::string(to_string(system))},
                          {"product_id", result.product_id},
                          {"summary", result.summary}}
                         .dump()
                  << '\n';
    }
    write_file_atomic(out_dir / "summaries.jsonl", summaries.str());
    write_file_atomic(out_dir / "manifest.json", manifest_to_json(manifest));
    std::cout << "wrote " << (results.size() - failed) << "/" << results.size()
              << " summaries to " << (out_dir / "summaries.jsonl").string() << "\n";
    if (failed == results.size()) return kExitRuntime;
    return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_summarize(const CLI::App* cmd, const std::string& corpus_path,
                  const PipelineFlags& flags) {
    const ConfigFile config_file =
        flags.config_path.empty() ? ConfigFile{} : parse_config_file(flags.config_path);
    const SystemKind system = parse_system_kind(flags.system_name);
    auto backends = make_backends(flags.backend_spec, config_file);
    const PipelineConfig config =
        resolve_pipeline_config(cmd, flags, config_file, backends);
    const auto corpora = load_reviews(corpus_path, parse_corpus_format(flags.format_name));
    if (corpora.empty()) throw PreconditionError("no reviews in " + corpus_path);

    const fs::path out_dir = flags.out_dir;
    fs::create_directories(out_dir);
    const fs::path state_dir = out_dir / "state";
    if (system == SystemKind::XlOpsumm) fs::create_directories(state_dir);

    RunManifest manifest;
    manifest.run_id = run_id_for(system, corpus_path, config);
    manifest.system = system;
    manifest.config = config;
    manifest.generation_backend = backends.generation_name;
    manifest.embedding_backend = backends.embedding_name;
    manifest.corpus_path = corpus_path;
    // mock runs must be byte-identical across invocations, so they pin time
    manifest.started_at = backends.deterministic ? "1970-01-01T00:00:00Z" : iso8601_now();

    auto extractor = make_extractor(flags);  // read-only, safe to share across jobs

    auto work = [&](const ProductCorpus& corpus) -> std::string {
        switch (system) {
            case SystemKind::XlOpsumm: {
                const fs::path state_path = state_dir / (corpus.product_id + ".json");
                auto checkpoint = [&](const SummaryState& state) {
                    write_file_atomic(state_path, state_to_json(state));
                };
                return run_pipeline(corpus, config, *backends.generation,
                                    *backends.embedding, extractor, checkpoint)
                    .global_summary;
            }
            case SystemKind::Incremental:
                return incremental_baseline(corpus, config, *backends.generation);
            case SystemKind::Hierarchical:
                return hierarchical_baseline(corpus, config, *backends.generation);
            case SystemKind::Full:
                return full_context_baseline(corpus, config, *backends.generation);
        }
        throw Error("unknown system");
    };

    const auto results = for_each_product(corpora, flags.jobs, work);
    manifest.finished_at = backends.deterministic ? "1970-01-01T00:00:00Z" : iso8601_now();
    return write_run_outputs(results, system, out_dir, std::move(manifest));
}

int cmd_resume(const CLI::App* cmd, const std::string& state_dir_arg,
               const std::string& corpus_path, const PipelineFlags& flags) {
    const ConfigFile config_file =
        flags.config_path.empty() ? ConfigFile{} : parse_config_file(flags.config_path);
    auto backends = make_backends(flags.backend_spec, config_file);
    const PipelineConfig config =
        resolve_pipeline_config(cmd, flags, config_file, backends);
    const auto corpora = load_reviews(corpus_path, parse_corpus_format(flags.format_name));
    if (corpora.empty()) throw PreconditionError("no reviews in " + corpus_path);

    const fs::path state_dir = state_dir_arg;
    const fs::path out_dir = flags.out_dir;
    fs::create_directories(out_dir);
    fs::create_directories(state_dir);

    RunManifest manifest;
    manifest.run_id = run_id_for(SystemKind::XlOpsumm, corpus_path, config);
    manifest.system = SystemKind::XlOpsumm;
    manifest.config = config;
    manifest.generation_backend = backends.generation_name;
    manifest.embedding_backend = backends.embedding_name;
    manifest.corpus_path = corpus_path;
    manifest.started_at = backends.deterministic ? "1970-01-01T00:00:00Z" : iso8601_now();

    auto extractor = make_extractor(flags);

    auto work = [&](const ProductCorpus& corpus) -> std::string {
        const fs::path state_path = state_dir / (corpus.product_id + ".json");
        auto checkpoint = [&](const SummaryState& state) {
            write_file_atomic(state_path, state_to_json(state));
        };
        if (fs::exists(state_path)) {
            auto state = state_from_json(read_file(state_path));
            return resume_pipeline(std::move(state), corpus, config, *backends.generation,
                                   *backends.embedding, extractor, checkpoint)
                .global_summary;
        }
        return run_pipeline(corpus, config, *backends.generation, *backends.embedding,
                            extractor, checkpoint)
            .global_summary;
    };

    const auto results = for_each_product(corpora, flags.jobs, work);
    manifest.finished_at = backends.deterministic ? "1970-01-01T00:00:00Z" : iso8601_now();
    return write_run_outputs(results, SystemKind::XlOpsumm, out_dir, std::move(manifest));
}

// ---- evaluate --------------------------------------------------------------------

std::map<std::string, std::string> load_references(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open references file: " + path, 0);
    std::map<std::string, std::string> references;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("references: ") + e.what(), lineno);
        }
        if (!record.contains("product_id") || !record.contains("reference"))
            throw ParseError("references: need product_id and reference", lineno);
        references[record["product_id"]] = record["reference"];
    }
    if (references.empty()) throw PreconditionError("references file is empty: " + path);
    return references;
}

void load_outputs(const std::string& path,
                  std::map<std::string, std::map<std::string, std::string>>& outputs) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open outputs file: " + path, 0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path + ": " + e.what(), lineno);
        }
        if (!record.contains("system") || !record.contains("product_id") ||
            !record.contains("summary"))
            throw ParseError(path + ": need system, product_id, summary", lineno);
        outputs[record["system"]][record["product_id"]] = record["summary"];
    }
}

int cmd_evaluate(const std::vector<std::string>& output_paths,
                 const std::string& references_path,
                 const std::vector<std::string>& pair_specs, const std::string& judge_spec,
                 const std::string& config_path, const std::string& report_path) {
    const ConfigFile config_file =
        config_path.empty() ? ConfigFile{} : parse_config_file(config_path);
    const auto references = load_references(references_path);
    std::map<std::string, std::map<std::string, std::string>> outputs;
    for (const auto& path : output_paths) load_outputs(path, outputs);
    if (outputs.empty()) throw PreconditionError("no summaries in the given output files");

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& spec : pair_specs) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
            throw PreconditionError("--pair expects A:B, got: " + spec);
        pairs.emplace_back(spec.substr(0, colon), spec.substr(colon + 1));
    }

    ResolvedBackends judge;
    GenerationBackend* judge_backend = nullptr;
    if (!judge_spec.empty()) {
        judge = make_backends(judge_spec, config_file);
        judge_backend = judge.generation.get();
    }

    const auto report = evaluate_run(outputs, references, pairs, judge_backend);
    write_file_atomic(report_path, report_to_json(report));
    std::cout << report_to_text(report);
    std::cout << "report: " << report_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental opinion summarization over large review corpora"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_input, ingest_out = "corpus.jsonl", ingest_format = "jsonl";
    auto* ingest = app.add_subcommand("ingest", "normalize a corpus and print its statistics");
    ingest->add_option("input", ingest_input, "raw corpus file")->required();
    ingest->add_option("--format", ingest_format, "jsonl | amasum");
    ingest->add_option("--out", ingest_out, "normalized reviews output path");

    // summarize
    PipelineFlags sum_flags;
    std::string sum_corpus;
    auto* summarize = app.add_subcommand("summarize", "run a summarization system");
    summarize->add_option("corpus", sum_corpus, "corpus file")->required();
    summarize->add_option("--system", sum_flags.system_name,
                          "xl-opsumm | incremental | hierarchical | full");
    add_pipeline_flags(summarize, sum_flags);

    // resume
    PipelineFlags res_flags;
    std::string res_state_dir, res_corpus;
    auto* resume = app.add_subcommand("resume", "continue persisted runs on a grown corpus");
    resume->add_option("state_dir", res_state_dir, "directory of per-product state files")
        ->required();
    resume->add_option("corpus", res_corpus, "corpus file")->required();
    add_pipeline_flags(resume, res_flags);

    // evaluate
    std::vector<std::string> eval_outputs, eval_pairs;
    std::string eval_references, eval_judge, eval_config, eval_report = "report.json";
    auto* evaluate = app.add_subcommand("evaluate", "score outputs against references");
    evaluate->add_option("outputs", eval_outputs, "summaries.jsonl files")->required();
    evaluate->add_option("--references", eval_references, "references jsonl")->required();
    evaluate->add_option("--pair", eval_pairs, "system pair A:B for a significance test");
    evaluate->add_option("--judge", eval_judge, "judge backend (name or mock:<script>)");
    evaluate->add_option("--config", eval_config, "config file for named judge backends");
    evaluate->add_option("--out", eval_report, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_input, ingest_format, ingest_out);
        if (*summarize) return cmd_summarize(summarize, sum_corpus, sum_flags);
        if (*resume) return cmd_resume(resume, res_state_dir, res_corpus, res_flags);
        return cmd_evaluate(eval_outputs, eval_references, eval_pairs, eval_judge,
                            eval_config, eval_report);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
