// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "geosquad/backend/counting_backend.hpp"
#include "geosquad/backend/http_backend.hpp"
#include "geosquad/backend/schema_render.hpp"
#include "geosquad/backend/scripted_backend.hpp"
#include "geosquad/backend/tokenizer.hpp"

using namespace geosquad;

TEST(Tokenizer, WordsAndPunctuationRuns) {
    EXPECT_EQ(count_tokens(""), 0);
    EXPECT_EQ(count_tokens("hello, world!"), 4);          // hello , world !
    EXPECT_EQ(count_tokens("a_b2 c"), 2);
    EXPECT_EQ(count_tokens("f(x): y"), 5);               // f ( x ): y
    EXPECT_EQ(count_tokens("  spaced\n\tout  "), 2);
    EXPECT_EQ(count_tokens("{\"k\":1}"), 5);             // {" k ": 1 "}
    EXPECT_EQ(word_terms("NDVI, in Brisbane!"), (std::vector<std::string>{"ndvi", "in", "brisbane"}));
}

TEST(Schema, CostIsTokenCountOfRendering) {
    ToolSpec t{"load_product", "Database", "Load a product",
               {{"product", "product", true}, {"date_range", "date_range", false}}, 0};
    const std::string r = render_tool_schema(t);
    EXPECT_EQ(r, "Database.load_product(product: product, date_range?: date_range) - Load a product");
    EXPECT_EQ(schema_token_cost(t), count_tokens(r));
    ToolSpec dup = t;
    EXPECT_THROW(render_tool_schemas({t, dup}), DuplicateTool);
}

TEST(Budget, ExactBudgetPassesOneMoreOverflows) {
    BackendConfig cfg;
    std::vector<ChatMessage> msgs{ChatMessage::user("one two three")};  // 3 tokens
    ToolSpec tool{"t", "A", "", {}, 0};
    tool.schema_token_cost = 600;
    cfg.context_budget = 603;
    EXPECT_EQ(check_context_budget(msgs, {tool}, cfg), 603);
    cfg.context_budget = 602;
    try {
        check_context_budget(msgs, {tool}, cfg);
        FAIL();
    } catch (const ContextOverflow& e) {
        EXPECT_EQ(e.required(), 603);
        EXPECT_EQ(e.budget(), 602);
        EXPECT_EQ(e.code(), "ContextOverflow");
    }
}

TEST(BackendConfig, Invariants) {
    BackendConfig c;
    EXPECT_NO_THROW(c.validate());
    c.kind = BackendKind::http;
    EXPECT_THROW(c.validate(), GeoError);
    c.endpoint = "http://localhost:1";
    EXPECT_NO_THROW(c.validate());
    c.context_budget = 511;
    EXPECT_THROW(c.validate(), GeoError);
}

namespace {

ScriptedBehavior two_rules() {
    ScriptedBehavior b;
    b.rules.push_back({"planner", "", {{{}, "schedule = [A(x)]"}}});
    ScriptedRule agent{"agent A", "load", {}};
    agent.replies.push_back({{{"load_product", Json{{"product", "ndvi"}}, -1}}, ""});
    agent.replies.push_back({{{"describe_dataset", Json{{"dataset", "ndvi"}}, -1}}, ""});
    agent.replies.push_back({{}, "A done"});
    b.rules.push_back(agent);
    return b;
}

}  // namespace

TEST(Scripted, RulesAndTurnsFollowHistory) {
    ScriptedBackend be(two_rules());
    BackendConfig cfg;
    std::vector<ChatMessage> m{ChatMessage::system("you are agent A"), ChatMessage::user("load it")};
    auto c1 = be.complete(m, {}, cfg);
    ASSERT_EQ(c1.message.tool_calls.size(), 1u);
    EXPECT_EQ(c1.message.tool_calls[0].name, "load_product");
    EXPECT_EQ(c1.message.tool_calls[0].id, "call_0_0");
    m.push_back(c1.message);
    m.push_back(ChatMessage::tool("call_0_0", "{}"));
    auto c2 = be.complete(m, {}, cfg);
    EXPECT_EQ(c2.message.tool_calls.at(0).name, "describe_dataset");
    EXPECT_EQ(c2.message.tool_calls.at(0).id, "call_1_0");
    m.push_back(c2.message);
    auto c3 = be.complete(m, {}, cfg);
    EXPECT_EQ(c3.message.content, "A done");
    m.push_back(c3.message);
    EXPECT_EQ(be.complete(m, {}, cfg).message.content, "done");  // replies exhausted

    // a new user message restarts the reply index
    m.push_back(ChatMessage::user("load again"));
    EXPECT_EQ(be.complete(m, {}, cfg).message.tool_calls.at(0).name, "load_product");

    // unmatched system prompt gets the default reply
    EXPECT_EQ(be.complete({ChatMessage::system("other"), ChatMessage::user("load")}, {}, cfg).message.content, "done");
    EXPECT_TRUE(be.scripted());
}

TEST(Scripted, UsageCountsPromptAndCompletion) {
    ScriptedBackend be(two_rules());
    BackendConfig cfg;
    const std::vector<ChatMessage> m{ChatMessage::system("planner"), ChatMessage::user("go")};
    const auto c = be.complete(m, {}, cfg);
    EXPECT_EQ(c.usage.prompt_tokens, count_tokens("planner") + count_tokens("go"));
    EXPECT_EQ(c.usage.completion_tokens, count_tokens("schedule = [A(x)]"));
    EXPECT_EQ(c.usage.total_tokens, c.usage.prompt_tokens + c.usage.completion_tokens);
}

TEST(Scripted, PerturbationsParse) {
    EXPECT_EQ(parse_perturbation("none").kind, Perturbation::Kind::none);
    EXPECT_EQ(parse_perturbation("drop_step:-1").step, -1);
    const auto s = parse_perturbation("swap_steps:0,2");
    EXPECT_EQ(s.step, 0);
    EXPECT_EQ(s.other_step, 2);
    EXPECT_EQ(parse_perturbation("wrong_args:load_product").tool, "load_product");
    EXPECT_THROW(parse_perturbation("drop_step:x"), GeoError);
    EXPECT_THROW(parse_perturbation("swap_steps:1"), GeoError);
    EXPECT_THROW(parse_perturbation("explode"), GeoError);
    for (const char* t : {"none", "drop_step:3", "swap_steps:1,2", "wrong_args:x"}) {
        EXPECT_EQ(to_string(parse_perturbation(t)), t);
    }
}

TEST(Scripted, DropStepRemovesTheCallAndItsEmptyReply) {
    ScriptedBehavior b = two_rules();
    b.perturbation = parse_perturbation("drop_step:-1");  // last call: describe_dataset
    const auto eff = apply_perturbation(b);
    ASSERT_EQ(eff.rules[1].replies.size(), 2u);
    EXPECT_EQ(eff.rules[1].replies[0].tool_calls.at(0).name, "load_product");
    EXPECT_EQ(eff.rules[1].replies[1].text, "A done");

    b.perturbation = parse_perturbation("drop_step:0");
    EXPECT_EQ(apply_perturbation(b).rules[1].replies[0].tool_calls.at(0).name, "describe_dataset");
}

TEST(Scripted, SwapAndWrongArgs) {
    ScriptedBehavior b = two_rules();
    b.perturbation = parse_perturbation("swap_steps:0,1");
    auto eff = apply_perturbation(b);
    EXPECT_EQ(eff.rules[1].replies[0].tool_calls.at(0).name, "describe_dataset");
    EXPECT_EQ(eff.rules[1].replies[1].tool_calls.at(0).name, "load_product");

    b.perturbation = parse_perturbation("wrong_args:load_product");
    eff = apply_perturbation(b);
    EXPECT_EQ(eff.rules[1].replies[0].tool_calls.at(0).args["product"], "ndvi_x");
    EXPECT_EQ(eff.rules[1].replies[1].tool_calls.at(0).args["dataset"], "ndvi");
}

TEST(Scripted, BehaviorJsonRoundTrip) {
    ScriptedBehavior b = two_rules();
    b.perturbation = parse_perturbation("drop_step:1");
    Json j = b;
    EXPECT_EQ(j.get<ScriptedBehavior>(), b);
}

TEST(Counting, SumsEveryCall) {
    ScriptedBackend inner(two_rules());
    CountingBackend counting(inner);
    BackendConfig cfg;
    const std::vector<ChatMessage> m{ChatMessage::system("planner"), ChatMessage::user("go")};
    const auto a = counting.complete(m, {}, cfg);
    const auto b = counting.complete(m, {}, cfg);
    EXPECT_EQ(counting.usage().calls.size(), 2u);
    EXPECT_EQ(counting.usage().total_tokens, a.usage.total_tokens + b.usage.total_tokens);
    EXPECT_TRUE(counting.scripted());
}

TEST(Http, RequestFollowsChatCompletionsShape) {
    BackendConfig cfg;
    cfg.model_name = "m";
    std::vector<ChatMessage> m{ChatMessage::system("s"), ChatMessage::user("u"),
                               ChatMessage::assistant("", {{"c1", "load_product", "{\"product\":\"ndvi\"}"}}),
                               ChatMessage::tool("c1", "{}")};
    ToolSpec t{"load_product", "Database", "Load", {{"product", "product", true}, {"date_range", "date_range", false}}, 0};
    const Json body = HttpBackend::build_request(m, {t}, cfg);
    EXPECT_EQ(body["model"], "m");
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(body["messages"].size(), 4u);
    EXPECT_EQ(body["messages"][2]["tool_calls"][0]["function"]["name"], "load_product");
    EXPECT_EQ(body["messages"][3]["tool_call_id"], "c1");
    const Json& fn = body["tools"][0]["function"];
    EXPECT_EQ(body["tools"][0]["type"], "function");
    EXPECT_EQ(fn["name"], "load_product");
    EXPECT_EQ(fn["parameters"]["required"], Json::array({"product"}));
    EXPECT_TRUE(fn["parameters"]["properties"].contains("date_range"));
}

TEST(Http, ResponseParsing) {
    const Json body = Json::parse(R"({"choices":[{"message":{"content":null,"tool_calls":[
        {"id":"x","type":"function","function":{"name":"f","arguments":"{\"a\":1}"}}]}}],
        "usage":{"prompt_tokens":7,"completion_tokens":3,"total_tokens":10}})");
    std::optional<CallUsage> reported;
    const ChatMessage m = HttpBackend::parse_response(body, &reported);
    EXPECT_EQ(m.content, "");
    ASSERT_EQ(m.tool_calls.size(), 1u);
    EXPECT_EQ(m.tool_calls[0].arguments, "{\"a\":1}");
    ASSERT_TRUE(reported);
    EXPECT_EQ(reported->total_tokens, 10);
    EXPECT_THROW(HttpBackend::parse_response(Json::object()), TransportError);
}

// Local endpoint: two 503s, then an answer.
TEST(Http, RetriesTransientFailures) {
    httplib::Server srv;
    std::atomic<int> hits{0};
    std::string auth;
    srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        auth = req.get_header_value("Authorization");
        if (++hits < 3) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"choices":[{"message":{"content":"hi"}}]})", "application/json");
    });
    const int port = srv.bind_to_any_port("127.0.0.1");
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.backoff_ms = 1;
    HttpBackend be(cfg, "secret");
    const auto c = be.complete({ChatMessage::user("hello")}, {}, cfg);
    EXPECT_EQ(c.message.content, "hi");
    EXPECT_EQ(hits.load(), 3);
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(c.usage.prompt_tokens, 1);

    hits = -10;  // every attempt fails now
    EXPECT_THROW(be.complete({ChatMessage::user("hello")}, {}, cfg), TransportError);
    srv.stop();
    th.join();
}

TEST(Http, OverflowIsCheckedBeforeSending) {
    BackendConfig cfg;
    cfg.kind = BackendKind::http;
    cfg.endpoint = "http://127.0.0.1:9";  // nothing listens; must not be contacted
    cfg.context_budget = 512;
    HttpBackend be(cfg, "");
    ToolSpec big{"t", "A", "", {}, 0};
    big.schema_token_cost = 600;
    EXPECT_THROW(be.complete({ChatMessage::user("x")}, {big}, cfg), ContextOverflow);
}
