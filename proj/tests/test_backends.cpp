#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "opsumm/backends.hpp"
#include "opsumm/corpus.hpp"
#include "opsumm/errors.hpp"

using namespace opsumm;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

// Local chat-completions server; `failures` requests return 500 first.
struct MockServer {
    explicit MockServer(int failures = 0) : remaining_failures(failures) {
        server.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
            ++hits;
            if (remaining_failures > 0) {
                --remaining_failures;
                res.status = 500;
                res.set_content("overloaded", "text/plain");
                return;
            }
            last_body = req.body;
            json reply = {{"choices",
                           json::array({{{"message", {{"role", "assistant"},
                                                      {"content", completion_text}}}}})}};
            res.set_content(reply.dump(), "application/json");
        });
        server.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
            json body = json::parse(req.body);
            json data = json::array();
            for (std::size_t i = 0; i < body["input"].size(); ++i)
                data.push_back({{"embedding", std::vector<double>{1.0, 0.0, 0.0, 0.0}}});
            res.set_content(json({{"data", data}}).dump(), "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~MockServer() {
        server.stop();
        thread.join();
    }
    BackendConfig config() const {
        BackendConfig c;
        c.base_url = "http://127.0.0.1:" + std::to_string(port);
        c.context_limit_tokens = 4096;
        c.retry_base_delay_ms = 1;
        return c;
    }

    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> remaining_failures{0};
    std::atomic<int> hits{0};
    std::string completion_text = "a canned completion";
    std::string last_body;
};

}  // namespace

TEST_CASE("cosine basics") {
    std::vector<double> x = {1.0, 0.0}, y = {0.0, 1.0}, neg = {-1.0, 0.0};
    CHECK(cosine(x, x) == doctest::Approx(1.0));
    CHECK(cosine(x, y) == doctest::Approx(0.0));
    CHECK(cosine(x, neg) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(cosine(x, std::vector<double>{1.0, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(cosine(x, std::vector<double>{0.0, 0.0}), PreconditionError);
}

TEST_CASE("scripted backend replays patterns and logs calls") {
    ScriptedBackend backend({{"UPDATE RULES", "updated summary"}});
    GenerationRequest request;
    request.user_prompt = "... UPDATE RULES ...";
    CHECK(backend.generate(request) == "updated summary");

    request.user_prompt = "one two three";
    CHECK(backend.generate(request) == "one two three");  // echo fallback

    std::string long_prompt;
    for (int i = 0; i < 80; ++i) long_prompt += "w" + std::to_string(i) + " ";
    request.user_prompt = long_prompt;
    CHECK(backend.generate(request) == truncate_to_tokens(long_prompt, 50));

    CHECK(backend.call_count() == 3);
    CHECK(backend.calls()[0].user_prompt == "... UPDATE RULES ...");
}

TEST_CASE("scripted backend loads from a script file") {
    auto backend = ScriptedBackend::from_file(fixture("script.json"));
    GenerationRequest request;
    request.user_prompt = "Following are the reviews for a product...";
    CHECK(backend.generate(request) ==
          "Users praise the battery and screen but dislike the camera.");
}

TEST_CASE("hash embeddings are deterministic unit vectors") {
    HashEmbeddingBackend backend(32);
    auto vectors = backend.embed({"battery", "battery"});
    REQUIRE(vectors.size() == 2);
    CHECK(vectors[0] == vectors[1]);
    CHECK(cosine(vectors[0], vectors[0]) == doctest::Approx(1.0).epsilon(1e-9));

    auto other = backend.embed({"screen"});
    CHECK(cosine(vectors[0], other[0]) < 0.9);  // distinct tokens land far apart

    // token order inside a text does not matter
    auto bags = backend.embed({"battery life", "life battery"});
    CHECK(cosine(bags[0], bags[1]) == doctest::Approx(1.0));
}

TEST_CASE("hash embeddings honor the synonym table") {
    HashEmbeddingBackend backend(16, {{"cam", "camera"}});
    auto vectors = backend.embed({"cam", "camera"});
    CHECK(cosine(vectors[0], vectors[1]) == doctest::Approx(1.0));
}

TEST_CASE("hash embedding dimension is enforced") {
    CHECK_THROWS_AS(HashEmbeddingBackend(1), PreconditionError);
    HashEmbeddingBackend backend(8);
    CHECK(backend.embed({"x"})[0].size() == 8);
}

TEST_CASE("http_generate returns the first choice content") {
    MockServer server;
    HttpGenerationBackend backend(server.config(), "test");
    GenerationRequest request;
    request.user_prompt = "hello";
    request.model = "test-model";
    CHECK(backend.generate(request) == "a canned completion");

    json body = json::parse(server.last_body);
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"] == doctest::Approx(0.8));
    CHECK(body["messages"].back()["content"] == "hello");
}

TEST_CASE("http_generate retries 5xx and succeeds on the third attempt") {
    MockServer server(2);
    HttpGenerationBackend backend(server.config(), "test");
    GenerationRequest request;
    request.user_prompt = "hello";
    CHECK(backend.generate(request) == "a canned completion");
    CHECK(server.hits == 3);
}

TEST_CASE("http_generate gives up after max_retries") {
    MockServer server(100);
    auto config = server.config();
    config.max_retries = 2;
    HttpGenerationBackend backend(config, "test");
    GenerationRequest request;
    request.user_prompt = "hello";
    try {
        backend.generate(request);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.retryable());
        CHECK(e.status() == 500);
    }
    CHECK(server.hits == 3);  // attempts = retries + 1
}

TEST_CASE("http_generate treats 4xx as fatal without retrying") {
    httplib::Server bad;
    bad.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        res.status = 404;
        res.set_content("no such model", "text/plain");
    });
    int port = bad.bind_to_any_port("127.0.0.1");
    std::thread t([&] { bad.listen_after_bind(); });
    bad.wait_until_ready();

    BackendConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.retry_base_delay_ms = 1;
    HttpGenerationBackend backend(config, "test");
    GenerationRequest request;
    request.user_prompt = "hello";
    try {
        backend.generate(request);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.status() == 404);
        CHECK_FALSE(e.retryable());
    }
    bad.stop();
    t.join();
}

TEST_CASE("http_generate rejects oversized prompts before any network call") {
    MockServer server;
    auto config = server.config();
    config.context_limit_tokens = 4;
    HttpGenerationBackend backend(config, "test");
    GenerationRequest request;
    request.user_prompt = "one two three four five";
    CHECK_THROWS_AS(backend.generate(request), PreconditionError);
    CHECK(server.hits == 0);
}

TEST_CASE("http embeddings read data[i].embedding") {
    MockServer server;
    HttpEmbeddingBackend backend(server.config(), 4);
    auto vectors = backend.embed({"a", "b"});
    REQUIRE(vectors.size() == 2);
    CHECK(vectors[0] == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(backend.embed({}).empty());
}
