#include <doctest.h>

#include "opsumm/baselines.hpp"
#include "opsumm/errors.hpp"

using namespace opsumm;

namespace {

ProductCorpus uniform_corpus(std::size_t n, std::size_t tokens) {
    ProductCorpus corpus;
    corpus.product_id = "p";
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        for (std::size_t t = 0; t < tokens; ++t) {
            if (!text.empty()) text += ' ';
            text += "review" + std::to_string(i) + "word" + std::to_string(t);
        }
        corpus.reviews.push_back(Review{"r" + std::to_string(i + 1), "p", text, {}, {}});
    }
    return corpus;
}

PipelineConfig config_with(std::size_t tau, std::size_t context = 8192) {
    PipelineConfig config;
    config.tau = tau;
    config.context_limit_tokens = context;
    return config;
}

ScriptedBackend baseline_backend(const std::string& leaf_response = "leaf summary") {
    return ScriptedBackend({{"Update the following summary", "running summary"},
                            {"several summaries of the reviews", "merged summary"},
                            {"Following are the reviews", leaf_response}});
}

}  // namespace

TEST_CASE("incremental baseline issues exactly n calls in chunk order") {
    for (std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{7}}) {
        auto backend = baseline_backend();
        auto corpus = uniform_corpus(n, 10);
        auto summary = incremental_baseline(corpus, config_with(10), backend);
        CHECK(backend.call_count() == n);
        if (n == 1)
            CHECK(summary == "leaf summary");
        else
            CHECK(summary == "running summary");
    }
}

TEST_CASE("incremental update prompts carry the running summary verbatim") {
    auto backend = baseline_backend("the very first summary");
    auto corpus = uniform_corpus(3, 10);
    incremental_baseline(corpus, config_with(10), backend);
    auto calls = backend.calls();
    REQUIRE(calls.size() == 3);
    CHECK(calls[1].user_prompt.find("the very first summary") != std::string::npos);
    CHECK(calls[2].user_prompt.find("running summary") != std::string::npos);
    CHECK(calls[1].user_prompt.find("Update the following summary using these new reviews") !=
          std::string::npos);
    // chunk 1's reviews appear in the second call
    CHECK(calls[1].user_prompt.find("review1word0") != std::string::npos);
}

TEST_CASE("hierarchical baseline with one chunk makes no merges") {
    auto backend = baseline_backend();
    auto corpus = uniform_corpus(1, 10);
    std::vector<MergeNode> tree;
    auto summary = hierarchical_baseline(corpus, config_with(100), backend, &tree);
    CHECK(summary == "leaf summary");
    CHECK(backend.call_count() == 1);
    REQUIRE(tree.size() == 1);
    CHECK(tree[0].level == 0);
}

TEST_CASE("hierarchical baseline packs all four summaries into one group") {
    // leaf summaries are 2 tokens each; tau 100 fits all four at once
    auto backend = baseline_backend();
    auto corpus = uniform_corpus(4, 10);
    std::vector<MergeNode> tree;
    auto summary = hierarchical_baseline(corpus, config_with(10, 8192), backend, &tree);
    (void)summary;
    CHECK(backend.call_count() == 5);  // 4 leaves + 1 merge
    REQUIRE(tree.size() == 5);
    CHECK(tree.back().level == 1);
    CHECK(tree.back().children.size() == 4);
}

TEST_CASE("hierarchical baseline merges pairwise when only pairs fit") {
    // tau of 5 fits two 2-token leaf summaries but not three
    ScriptedBackend backend({{"Update the following summary", "running summary"},
                             {"several summaries of the reviews", "m1 m2"},
                             {"Following are the reviews", "s1 s2"}});
    auto corpus = uniform_corpus(4, 10);
    PipelineConfig config = config_with(5);
    // leaf summaries "s1 s2" are 2 tokens: two fit under tau=5, three do not
    std::vector<MergeNode> tree;
    hierarchical_baseline(corpus, config, backend, &tree);
    // 4 leaves + 2 pair merges + 1 final merge
    CHECK(backend.call_count() == 7);
    CHECK(tree.back().level == 2);
}

TEST_CASE("hierarchical merge groups preserve left-to-right chunk order") {
    auto backend = baseline_backend();
    auto corpus = uniform_corpus(6, 10);
    std::vector<MergeNode> tree;
    hierarchical_baseline(corpus, config_with(10), backend, &tree);
    // level-1 children are leaf node indices, which follow chunk order
    for (const auto& node : tree) {
        if (node.level > 1) continue;
        for (std::size_t i = 1; i < node.children.size(); ++i)
            CHECK(node.children[i - 1] < node.children[i]);
    }
}

TEST_CASE("full context baseline issues one call with all reviews when they fit") {
    auto backend = baseline_backend();
    auto corpus = uniform_corpus(5, 10);
    full_context_baseline(corpus, config_with(10, 8192), backend);
    CHECK(backend.call_count() == 1);
    const auto prompt = backend.calls()[0].user_prompt;
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(prompt.find("review" + std::to_string(i) + "word0") != std::string::npos);
}

TEST_CASE("full context baseline truncates to exactly the context cap") {
    auto backend = baseline_backend();
    auto corpus = uniform_corpus(40, 10);  // 400 review tokens
    PipelineConfig config = config_with(10, 120);
    full_context_baseline(corpus, config, backend);
    CHECK(backend.call_count() == 1);
    const auto prompt = backend.calls()[0].user_prompt;
    CHECK(count_tokens(prompt) == 120);
    CHECK(prompt.find("review39word0") == std::string::npos);  // late reviews absent
}
