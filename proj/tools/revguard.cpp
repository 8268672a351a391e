#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "revguard/attacks.hpp"
#include "revguard/corpus.hpp"
#include "revguard/defense.hpp"
#include "revguard/errors.hpp"
#include "revguard/eval_harness.hpp"
#include "revguard/gateway.hpp"
#include "revguard/io.hpp"
#include "revguard/parallel.hpp"
#include "revguard/prob_table.hpp"
#include "revguard/resources.hpp"
#include "revguard/rr_detector.hpp"
#include "revguard/synthetic.hpp"
#include "revguard/tf_detector.hpp"

namespace fs = std::filesystem;
using namespace revguard;

namespace {

struct GlobalOptions {
    std::string data_dir;
    std::string gateway_config;
    std::string cache_dir;
    std::optional<std::size_t> threads;

    std::size_t thread_count() const { return threads.value_or(default_thread_count()); }
};

fs::path data_dir_of(const GlobalOptions& g) {
    return g.data_dir.empty() ? default_data_dir() : fs::path(g.data_dir);
}

Resources resources_of(const GlobalOptions& g) {
    return load_resources(data_dir_of(g));
}

GatewayConfig gateway_config_of(const GlobalOptions& g) {
    GatewayConfig c;
    if (!g.gateway_config.empty()) {
        const fs::path path(g.gateway_config);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(io::read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
        c = gateway_config_from_json(j, path.parent_path());
    }
    if (!g.cache_dir.empty()) c.cache_dir = g.cache_dir;
    if (c.prompts_dir.empty()) c.prompts_dir = data_dir_of(g) / "prompts";
    return c;
}

std::unique_ptr<Gateway> gateway_of(const GlobalOptions& g, const Resources& res) {
    return std::make_unique<Gateway>(gateway_config_of(g), res.thesaurus, res.tagger);
}

std::vector<ReviewRecord> human_and_ai(const Corpus& corpus, const std::set<std::string>& ids) {
    std::vector<ReviewRecord> out;
    for (auto& r : corpus.select(ids)) {
        if (r.origin == Origin::HUMAN || r.origin == Origin::AI) out.push_back(std::move(r));
    }
    return out;
}

ReviewRecord review_from_file(const fs::path& path, const std::string& venue) {
    ReviewRecord r;
    r.review_id = path.stem().string();
    r.paper_id = path.stem().string();
    r.venue = parse_venue(venue);
    r.text = io::read_file(path);
    return r;
}

void print_json(const nlohmann::ordered_json& j) {
    std::cout << j.dump(2) << "\n";
}

nlohmann::ordered_json verdict_json(const DetectionVerdict& v) {
    nlohmann::ordered_json j;
    j["review_id"] = v.review_id;
    j["detector"] = to_string(v.detector);
    j["probability_ai"] = v.probability_ai;
    j["label"] = to_string(v.label);
    j["threshold"] = v.threshold_used;
    return j;
}

std::string sidecar(const std::string& explicit_path, const fs::path& out, const std::string& suffix) {
    return explicit_path.empty() ? out.string() + suffix : explicit_path;
}

// corpus

void add_corpus_commands(CLI::App& app, GlobalOptions&) {
    auto* corpus = app.add_subcommand("corpus", "Validate, split or synthesise review corpora");
    corpus->require_subcommand(1);

    static std::string path;
    auto* validate_cmd = corpus->add_subcommand("validate", "Check a JSONL corpus and print its statistics");
    validate_cmd->add_option("path", path, "Corpus file (.jsonl or .jsonl.gz)")->required();
    validate_cmd->callback([] {
        const Corpus c = load_corpus(path);
        nlohmann::ordered_json j;
        j["reviews"] = c.size();
        j["papers"] = c.paper_ids().size();
        for (const auto& [o, n] : c.origin_counts()) j["origins"][std::string(to_string(o))] = n;
        for (const auto& [v, n] : c.venue_counts()) j["venues"][std::string(to_string(v))] = n;
        print_json(j);
    });

    static std::string ratios = "0.8,0.1,0.1";
    static std::uint64_t split_seed = 42;
    static std::string split_out;
    auto* split_cmd = corpus->add_subcommand("split", "Partition a corpus by paper");
    split_cmd->add_option("path", path, "Corpus file")->required();
    split_cmd->add_option("--ratios", ratios, "train,validation,test")->capture_default_str();
    split_cmd->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
    split_cmd->add_option("--out", split_out, "Write the partition as JSON here instead of stdout");
    split_cmd->callback([] {
        const Corpus c = load_corpus(path);
        const CorpusSplit s = split_corpus(c, parse_ratios(ratios), split_seed);
        nlohmann::ordered_json j;
        j["seed"] = s.seed;
        j["train"] = s.train;
        j["validation"] = s.validation;
        j["test"] = s.test;
        if (split_out.empty()) {
            print_json(j);
        } else {
            io::write_file_atomic(split_out, j.dump(2) + "\n");
        }
    });

    static std::size_t n_papers = 200;
    static double bias = 0.6;
    static std::uint64_t synth_seed = 42;
    static std::string synth_out;
    static std::string papers_out;
    auto* synth = corpus->add_subcommand("synth", "Generate a synthetic corpus with paper texts");
    synth->add_option("--papers", n_papers, "Number of papers")->capture_default_str();
    synth->add_option("--bias", bias, "AI characteristic-token bias in [0,1]")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output corpus file")->required();
    synth->add_option("--papers-out", papers_out, "Paper text directory (default: <out>.papers)");
    synth->callback([] {
        const auto ds = make_synthetic_dataset(n_papers, synth_seed, bias);
        save_corpus(ds.corpus, synth_out);
        const fs::path pdir = papers_out.empty() ? fs::path(synth_out + ".papers") : fs::path(papers_out);
        save_papers(ds.papers, pdir);
        std::cout << "wrote " << ds.corpus.size() << " reviews to " << synth_out << " and " << ds.papers.size()
                  << " papers to " << pdir.string() << "\n";
    });
}

// table

void add_table_commands(CLI::App& app, GlobalOptions& g) {
    auto* table = app.add_subcommand("table", "Token probability tables");
    table->require_subcommand(1);
    static std::string corpus_path, pos = "adjective", out, ratios = "0.8,0.1,0.1";
    static std::uint64_t split_seed = 42;
    static bool whole = false;
    auto* build = table->add_subcommand("build", "Build a table from the training partition of a corpus");
    build->add_option("--corpus", corpus_path, "Corpus file")->required();
    build->add_option("--pos", pos, "adjective, noun or adverb")->capture_default_str();
    build->add_option("--ratios", ratios, "Split ratios")->capture_default_str();
    build->add_option("--split-seed", split_seed, "Split seed")->capture_default_str();
    build->add_flag("--whole", whole, "Use every HUMAN and AI review instead of the training partition");
    build->add_option("--out", out, "Output table (TSV)")->required();
    build->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const Resources res = resources_of(g);
        std::set<std::string> ids;
        if (whole) {
            for (const auto& r : c.records()) ids.insert(r.review_id);
        } else {
            ids = split_corpus(c, parse_ratios(ratios), split_seed).train;
        }
        std::vector<ReviewRecord> ai, human;
        for (auto& r : human_and_ai(c, ids)) (r.origin == Origin::AI ? ai : human).push_back(std::move(r));
        const auto t = build_prob_table(ai, human, parse_pos_class(pos), *res.tagger);
        save_table(t, out);
        std::cout << "table " << t.hash() << ": " << t.p_ai.size() << " AI and " << t.p_human.size()
                  << " human tokens\n";
    });
}

// tf

void add_tf_commands(CLI::App& app, GlobalOptions& g) {
    auto* tf = app.add_subcommand("tf", "Token-frequency detector");
    tf->require_subcommand(1);

    static std::string corpus_path, pos = "adjective", out, table_out, ratios = "0.8,0.1,0.1";
    static std::uint64_t seed = 0, split_seed = 42;
    auto* train = tf->add_subcommand("train", "Train on the training partition, select on validation");
    train->add_option("--corpus", corpus_path, "Corpus file")->required();
    train->add_option("--pos", pos, "adjective, noun or adverb")->capture_default_str();
    train->add_option("--seed", seed, "Training seed")->capture_default_str();
    train->add_option("--ratios", ratios, "Split ratios")->capture_default_str();
    train->add_option("--split-seed", split_seed, "Split seed")->capture_default_str();
    train->add_option("--out", out, "Model file")->required();
    train->add_option("--table-out", table_out, "Table file (default: <out>.table.tsv)");
    train->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const Resources res = resources_of(g);
        const CorpusSplit s = split_corpus(c, parse_ratios(ratios), split_seed);
        const auto train_set = human_and_ai(c, s.train);
        const auto val_set = human_and_ai(c, s.validation);
        std::vector<ReviewRecord> ai, human;
        for (const auto& r : train_set) (r.origin == Origin::AI ? ai : human).push_back(r);
        const auto table = build_prob_table(ai, human, parse_pos_class(pos), *res.tagger);
        auto labeled = [&](const std::vector<ReviewRecord>& set) {
            std::vector<LabeledTF> v(set.size());
            parallel_for(set.size(), g.thread_count(), [&](std::size_t i) {
                v[i] = {featurize_tf(set[i], table, *res.tagger), set[i].origin == Origin::AI};
            });
            return v;
        };
        const TFModel m = train_tf(labeled(train_set), labeled(val_set), default_tf_hyperparams(seed), table);
        save_tf_model(m, out);
        save_table(table, sidecar(table_out, out, ".table.tsv"));
        std::cout << "best epoch " << m.best_epoch << ", validation F1 " << m.best_val_f1 << "\n";
    });

    static std::string model, table_path, review, venue = "iclr";
    auto* detect = tf->add_subcommand("detect", "Classify one review");
    detect->add_option("--model", model, "Model file")->required();
    detect->add_option("--table", table_path, "Table file (default: <model>.table.tsv)");
    detect->add_option("--review", review, "Review text file")->required();
    detect->callback([&g] {
        const Resources res = resources_of(g);
        const TFModel m = load_tf_model(model);
        const auto table = load_table(sidecar(table_path, model, ".table.tsv"));
        print_json(verdict_json(predict_tf(m, review_from_file(review, venue), table, *res.tagger)));
    });
}

// gateway

void add_gateway_commands(CLI::App& app, GlobalOptions& g) {
    auto* gw = app.add_subcommand("gateway", "Language model and embedding access");
    gw->require_subcommand(1);

    static std::string paper, venue = "iclr";
    auto* regen = gw->add_subcommand("regen", "Regenerate a review from a paper");
    regen->add_option("--paper", paper, "Paper text file")->required();
    regen->add_option("--venue", venue, "iclr or neurips")->capture_default_str();
    regen->callback([&g] {
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        std::cout << gateway->regenerate_review(io::read_file(paper), parse_venue(venue)) << "\n";
    });

    static std::string review;
    auto* para = gw->add_subcommand("paraphrase", "Paraphrase a review");
    para->add_option("--review", review, "Review text file")->required();
    para->callback([&g] {
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        std::cout << gateway->paraphrase_review(io::read_file(review)) << "\n";
    });

    static std::string text;
    auto* embed = gw->add_subcommand("embed", "Embed a text");
    embed->add_option("--text", text, "Text file")->required();
    embed->callback([&g] {
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        const auto e = gateway->embed_text(io::read_file(text));
        nlohmann::ordered_json j;
        j["model_id"] = e.model_id;
        j["dim"] = e.dim();
        j["values"] = e.values;
        std::cout << j.dump() << "\n";
    });

    auto* cache = gw->add_subcommand("cache", "Inspect or clear the response cache");
    cache->require_subcommand(1);
    auto cache_dir = [&g] {
        const auto c = gateway_config_of(g);
        if (c.cache_dir.empty()) throw ConfigError("no cache directory configured (use --cache-dir)");
        return c.cache_dir;
    };
    cache->add_subcommand("stats", "Entry counts and size")->callback([cache_dir] {
        const auto s = cache_summary(cache_dir());
        nlohmann::ordered_json j;
        j["entries"] = s.entries;
        j["bytes"] = s.bytes;
        j["by_kind"] = s.by_kind;
        print_json(j);
    });
    cache->add_subcommand("clear", "Remove every cached response")->callback([cache_dir] {
        std::cout << "removed " << clear_cache(cache_dir()) << " entries\n";
    });
}

// rr

void add_rr_commands(CLI::App& app, GlobalOptions& g) {
    auto* rr = app.add_subcommand("rr", "Regeneration-similarity detector");
    rr->require_subcommand(1);

    static std::string corpus_path, papers_dir, out;
    auto* feat = rr->add_subcommand("featurize", "Similarity feature of every HUMAN and AI review");
    feat->add_option("--corpus", corpus_path, "Corpus file")->required();
    feat->add_option("--papers", papers_dir, "Paper text directory")->required();
    feat->add_option("--out", out, "Output JSONL (default: stdout)");
    feat->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const PaperTexts papers = load_papers(papers_dir);
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        std::set<std::string> ids;
        for (const auto& r : c.records()) ids.insert(r.review_id);
        const auto records = human_and_ai(c, ids);
        require_paper_texts(records, papers);
        std::vector<RRFeatures> f(records.size());
        parallel_for(records.size(), g.thread_count(),
                     [&](std::size_t i) { f[i] = featurize_rr(records[i], papers.at(records[i].paper_id), *gateway); });
        std::string body;
        for (std::size_t i = 0; i < f.size(); ++i) {
            nlohmann::ordered_json j;
            j["review_id"] = f[i].review_id;
            j["regen_id"] = f[i].regen_id;
            j["similarity"] = f[i].similarity;
            j["label"] = records[i].origin == Origin::AI ? "AI" : "HUMAN";
            body += j.dump() + "\n";
        }
        if (out.empty()) {
            std::cout << body;
        } else {
            io::write_file_atomic(out, body);
        }
    });

    static std::string ratios = "0.8,0.1,0.1";
    static std::uint64_t seed = 0, split_seed = 42;
    auto* train = rr->add_subcommand("train", "Train on the training partition, select on validation");
    train->add_option("--corpus", corpus_path, "Corpus file")->required();
    train->add_option("--papers", papers_dir, "Paper text directory")->required();
    train->add_option("--seed", seed, "Training seed")->capture_default_str();
    train->add_option("--ratios", ratios, "Split ratios")->capture_default_str();
    train->add_option("--split-seed", split_seed, "Split seed")->capture_default_str();
    train->add_option("--out", out, "Model file")->required();
    train->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const PaperTexts papers = load_papers(papers_dir);
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        const CorpusSplit s = split_corpus(c, parse_ratios(ratios), split_seed);
        auto labeled = [&](const std::vector<ReviewRecord>& set) {
            require_paper_texts(set, papers);
            std::vector<LabeledRR> v(set.size());
            parallel_for(set.size(), g.thread_count(), [&](std::size_t i) {
                v[i] = {featurize_rr(set[i], papers.at(set[i].paper_id), *gateway), set[i].origin == Origin::AI};
            });
            return v;
        };
        const RRModel m = train_rr(labeled(human_and_ai(c, s.train)), labeled(human_and_ai(c, s.validation)),
                                   default_rr_hyperparams(seed), gateway.get());
        save_rr_model(m, out);
        std::cout << "best epoch " << m.best_epoch << ", validation F1 " << m.best_val_f1 << "\n";
    });

    static std::string model, review, paper, venue = "iclr";
    auto* detect = rr->add_subcommand("detect", "Classify one review against its paper");
    detect->add_option("--model", model, "Model file")->required();
    detect->add_option("--review", review, "Review text file")->required();
    detect->add_option("--paper", paper, "Paper text file")->required();
    detect->add_option("--venue", venue, "iclr or neurips")->capture_default_str();
    detect->callback([&g] {
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        const RRModel m = load_rr_model(model);
        if (m.embedding_model_id != gateway->embedding_model_id() ||
            m.generation_model_id != gateway->generation_model_id()) {
            std::cerr << "warning: model was trained with " << m.generation_model_id << " / "
                      << m.embedding_model_id << "\n";
        }
        const auto r = review_from_file(review, venue);
        const auto features = featurize_rr(r, io::read_file(paper), *gateway);
        auto j = verdict_json(predict_rr(m, features));
        j["similarity"] = features.similarity;
        print_json(j);
    });
}

// attack

void add_attack_commands(CLI::App& app, GlobalOptions& g) {
    auto* attack = app.add_subcommand("attack", "Token substitution attack");
    attack->require_subcommand(1);
    static std::string corpus_path, table_path, pos = "adjective", out, log;
    static std::size_t k = 100;
    auto* run = attack->add_subcommand("run", "Attack every AI review of a corpus");
    run->add_option("--corpus", corpus_path, "Corpus file")->required();
    run->add_option("--table", table_path, "Token probability table")->required();
    run->add_option("--pos", pos, "adjective, noun or adverb")->capture_default_str();
    run->add_option("--k", k, "Number of top AI tokens to replace")->capture_default_str();
    run->add_option("--out", out, "Output corpus")->required();
    run->add_option("--log", log, "Substitution log (default: <out>.substitutions.jsonl)");
    run->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const Resources res = resources_of(g);
        AttackConfig cfg;
        cfg.pos_class = parse_pos_class(pos);
        cfg.k = k;
        cfg.table = std::make_shared<TokenProbTable>(load_table(table_path));
        cfg.thesaurus = res.thesaurus;
        validate(cfg);
        std::vector<ReviewRecord> records = c.records();
        std::vector<std::pair<std::string, std::vector<Substitution>>> subs;
        std::vector<std::size_t> ai_index;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].origin == Origin::AI) ai_index.push_back(i);
        }
        std::vector<AttackedReview> attacked(ai_index.size());
        parallel_for(ai_index.size(), g.thread_count(),
                     [&](std::size_t i) { attacked[i] = token_attack(records[ai_index[i]], cfg, *res.tagger); });
        for (auto& a : attacked) {
            subs.emplace_back(a.attacked.review_id, std::move(a.substitutions));
            records.push_back(std::move(a.attacked));
        }
        save_corpus(Corpus::from_records(std::move(records)), out);
        io::write_file_atomic(sidecar(log, out, ".substitutions.jsonl"), substitution_log(subs));
        std::cout << "attacked " << attacked.size() << " AI reviews\n";
    });
}

// defense

void add_defense_commands(CLI::App& app, GlobalOptions& g) {
    auto* defense = app.add_subcommand("defense", "Regeneration-guided reversion defense");
    defense->require_subcommand(1);
    static std::string corpus_path, papers_dir, out, log;
    auto* apply = defense->add_subcommand("apply", "Append a defended variant of every review");
    apply->add_option("--corpus", corpus_path, "Corpus file")->required();
    apply->add_option("--papers", papers_dir, "Paper text directory")->required();
    apply->add_option("--out", out, "Output corpus")->required();
    apply->add_option("--log", log, "Reversion log (default: <out>.reversions.jsonl)");
    apply->callback([&g] {
        const Corpus c = load_corpus(corpus_path);
        const PaperTexts papers = load_papers(papers_dir);
        const Resources res = resources_of(g);
        auto gateway = gateway_of(g, res);
        const DefenseContext ctx{gateway.get(), res.thesaurus.get(), res.tagger.get(), g.thread_count()};
        std::vector<ReviewRecord> sources;
        for (const auto& r : c.records()) {
            if (r.origin != Origin::DEFENDED_VARIANT) sources.push_back(r);
        }
        std::vector<std::vector<Substitution>> reversions;
        auto defended = defend_records(sources, papers, ctx, &reversions);
        std::vector<std::pair<std::string, std::vector<Substitution>>> per_review;
        for (std::size_t i = 0; i < defended.size(); ++i) {
            per_review.emplace_back(defended[i].review_id, std::move(reversions[i]));
        }
        std::vector<ReviewRecord> records = c.records();
        for (auto& d : defended) records.push_back(std::move(d));
        save_corpus(Corpus::from_records(std::move(records)), out);
        io::write_file_atomic(sidecar(log, out, ".reversions.jsonl"), substitution_log(per_review));
        std::cout << "defended " << sources.size() << " reviews\n";
    });
}

// eval

void add_eval_commands(CLI::App& app, GlobalOptions& g) {
    auto* eval = app.add_subcommand("eval", "Experiments");
    eval->require_subcommand(1);
    static std::string config_path, run_dir;
    auto* run = eval->add_subcommand("run", "Run an experiment and write its run directory");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", run_dir, "Run directory (default: runs/<config stem>)");
    run->callback([&g] {
        const fs::path path(config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(io::read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
        ExperimentConfig cfg = experiment_config_from_json(j, path.parent_path());
        if (!g.data_dir.empty()) cfg.data_dir = g.data_dir;
        if (!g.cache_dir.empty()) cfg.gateway.cache_dir = g.cache_dir;
        if (g.threads) cfg.threads = *g.threads;
        const ExperimentResult result = run_experiment(cfg);
        const fs::path dir = run_dir.empty() ? fs::path("runs") / path.stem() : fs::path(run_dir);
        write_run(result, dir);
        std::cout << result.table;
        std::cerr << "gateway: " << result.gateway_stats.backend_requests << " backend requests, "
                  << result.gateway_stats.cache_hits << " cache hits, " << result.gateway_stats.cache_misses
                  << " misses\nrun written to " << dir.string() << "\n";
    });
    auto* report = eval->add_subcommand("report", "Print the table of a run directory");
    report->add_option("run-dir", run_dir, "Run directory")->required();
    report->callback([] { std::cout << render_run_report(run_dir); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"revguard: detection of machine-written peer reviews"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--data-dir", g.data_dir, "Tagger, WordNet and prompt data (default: build-time data dir)");
    app.add_option("--gateway-config", g.gateway_config, "Gateway config (JSON)");
    app.add_option("--cache-dir", g.cache_dir, "Response cache directory");
    app.add_option("--threads", g.threads, "Worker threads (default: hardware concurrency)");

    add_corpus_commands(app, g);
    add_table_commands(app, g);
    add_tf_commands(app, g);
    add_gateway_commands(app, g);
    add_rr_commands(app, g);
    add_attack_commands(app, g);
    add_defense_commands(app, g);
    add_eval_commands(app, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
