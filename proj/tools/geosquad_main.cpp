// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "geosquad/service/commands.hpp"

using namespace geosquad;

namespace {

void common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config, "engine config file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "dataset seed");
    app->add_option("--budget", o.budget, "context budget in tokens");
    app->add_option("--workers", o.workers, "parallel benchmark workers");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geosquad: multi-agent geospatial copilot engine"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "generate the benchmark dataset and memory stores");
    common(g, gen);
    g->add_option("--per-agent", gen.per_agent, "benchmark tasks per agent");
    g->add_flag("--full", gen.full, "full-size dataset (250 per agent, 2000 tasks)");
    g->add_option("--templates", gen.templates, "template JSON file")->check(CLI::ExistingFile);

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "run strategies over the dataset and write report.md/report.csv");
    common(b, bench);
    b->add_option("--strategy", bench.strategies, "comma list, 'all', entries may add +ts / +wm");
    b->add_option("--domains", bench.domains, "number of domains (canonical order) or comma list of names");
    b->add_option("--per-agent", bench.per_agent, "benchmark tasks per agent");
    b->add_flag("--full", bench.full, "full-size dataset (250 per agent, 2000 tasks)");
    b->add_flag("--ts", bench.ts, "tool-selection memory");
    b->add_flag("--wm", bench.wm, "workflow memory");
    b->add_flag("--allow-failures", bench.allow_failures, "exit 0 even when runs overflow the context");
    b->add_option("--out", bench.out, "output directory");
    b->add_option("--perturbation", bench.perturbation, "none | drop_step:K | swap_steps:I,J | wrong_args:TOOL");
    b->add_flag("--omit-database", bench.omit_database, "planner leaves Database steps out");

    ChatOptions chat;
    auto* c = app.add_subcommand("chat", "run one request and print the answer");
    common(c, chat);
    c->add_option("prompt", chat.prompt, "request text")->required();
    c->add_option("--strategy", chat.strategy, "orchestration strategy (default hybrid)");
    c->add_flag("--ts", chat.ts, "tool-selection memory");
    c->add_flag("--wm", chat.wm, "workflow memory");

    ServeOptions serve;
    auto* s = app.add_subcommand("serve", "HTTP API for the web UI");
    common(s, serve);
    s->add_option("--host", serve.host, "bind address");
    s->add_option("--port", serve.port, "port, 0 picks a free one");
    s->add_option("--static", serve.static_dir, "directory of UI assets to serve at /")->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (g->parsed()) return cmd_gen(gen, std::cout, std::cerr);
    if (b->parsed()) return cmd_bench(bench, std::cout, std::cerr);
    if (c->parsed()) return cmd_chat(chat, std::cout, std::cerr);
    return cmd_serve(serve, std::cout, std::cerr);
}
