#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "opsumm/absa.hpp"
#include "opsumm/backends.hpp"
#include "opsumm/corpus.hpp"
#include "opsumm/eval.hpp"
#include "opsumm/summarizer.hpp"

using namespace opsumm;

namespace {

std::string synthetic_text(std::size_t tokens, std::uint32_t seed) {
    static const std::vector<std::string> vocab = {
        "battery", "camera", "screen",  "price", "great", "good",  "bad",
        "slow",    "the",    "is",      "and",   "but",   "value", "solid",
        "works",   "well",   "arrived", "fast",  "broke", "after"};
    std::mt19937 rng(seed);
    std::string out;
    for (std::size_t i = 0; i < tokens; ++i) {
        if (!out.empty()) out += ' ';
        out += vocab[rng() % vocab.size()];
    }
    return out;
}

ProductCorpus synthetic_corpus(std::size_t reviews, std::size_t tokens_each) {
    ProductCorpus corpus;
    corpus.product_id = "bench";
    for (std::size_t i = 0; i < reviews; ++i)
        corpus.reviews.push_back(Review{"r" + std::to_string(i), "bench",
                                        synthetic_text(tokens_each, static_cast<std::uint32_t>(i)),
                                        {}, {}});
    return corpus;
}

void bm_count_tokens(benchmark::State& state) {
    const std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(count_tokens(text));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_count_tokens)->Arg(100)->Arg(1000)->Arg(10000);

void bm_chunk_reviews(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 60);
    for (auto _ : state) benchmark::DoNotOptimize(chunk_reviews(corpus, 500));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_chunk_reviews)->Arg(100)->Arg(1000)->Arg(5000);

void bm_rouge_l(benchmark::State& state) {
    const std::string candidate = synthetic_text(static_cast<std::size_t>(state.range(0)), 11);
    const std::string reference = synthetic_text(static_cast<std::size_t>(state.range(0)), 13);
    for (auto _ : state) benchmark::DoNotOptimize(rouge_l(candidate, reference));
}
BENCHMARK(bm_rouge_l)->Arg(50)->Arg(200)->Arg(800);

void bm_rouge_2(benchmark::State& state) {
    const std::string candidate = synthetic_text(static_cast<std::size_t>(state.range(0)), 11);
    const std::string reference = synthetic_text(static_cast<std::size_t>(state.range(0)), 13);
    for (auto _ : state) benchmark::DoNotOptimize(rouge_n(candidate, reference, 2));
}
BENCHMARK(bm_rouge_2)->Arg(50)->Arg(200)->Arg(800);

void bm_hash_embedding(benchmark::State& state) {
    HashEmbeddingBackend backend(64);
    std::vector<std::string> aspects;
    for (int i = 0; i < state.range(0); ++i) aspects.push_back("aspect" + std::to_string(i));
    for (auto _ : state) benchmark::DoNotOptimize(backend.embed(aspects));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_hash_embedding)->Arg(16)->Arg(128)->Arg(1024);

void bm_cluster_aspects(benchmark::State& state) {
    HashEmbeddingBackend backend(32);
    AspectDictionary dict;
    std::mt19937 rng(3);
    for (int i = 0; i < state.range(0); ++i)
        dict["aspect" + std::to_string(i)] = SentimentCounts{rng() % 5, rng() % 5, rng() % 5};
    for (auto _ : state) benchmark::DoNotOptimize(cluster_aspects(dict, backend, 0.75));
}
BENCHMARK(bm_cluster_aspects)->Arg(16)->Arg(64)->Arg(256);

void bm_lexicon_extract(benchmark::State& state) {
    LexiconExtractor extractor({"battery", "camera", "screen", "price"},
                               {{"great", Sentiment::Positive},
                                {"good", Sentiment::Positive},
                                {"bad", Sentiment::Negative},
                                {"slow", Sentiment::Negative}},
                               3);
    const std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 21);
    for (auto _ : state) benchmark::DoNotOptimize(extractor.extract(text));
}
BENCHMARK(bm_lexicon_extract)->Arg(50)->Arg(500);

void bm_full_pipeline_mock(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 40);
    PipelineConfig config;
    config.tau = 400;
    config.context_limit_tokens = 8192;
    LexiconExtractor extractor({"battery", "camera", "screen", "price"},
                               {{"great", Sentiment::Positive},
                                {"bad", Sentiment::Negative}},
                               3);
    HashEmbeddingBackend embedder(32);
    for (auto _ : state) {
        ScriptedBackend backend({{"ASPECT DICTIONARY:", "updated global"},
                                 {"Following are the reviews", "local summary"}});
        benchmark::DoNotOptimize(
            run_pipeline(corpus, config, backend, embedder, extractor));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_full_pipeline_mock)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
