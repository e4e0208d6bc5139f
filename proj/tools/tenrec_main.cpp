#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "../src/cli/commands.hpp"
#include "tenrec/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tenrec - hybrid tensor factorization recommender"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file");
        cmd->add_option("--set", overrides, "override: section.key=value")->take_all();
    };

    CLI::App* prepare = app.add_subcommand("prepare", "load a dataset and dump canonical files");
    CLI::App* train = app.add_subcommand("train", "train a model and serialize it");
    CLI::App* tune = app.add_subcommand("tune", "two-stage hyper-parameter search on fold 0");
    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validated metric report");
    CLI::App* recommend = app.add_subcommand("recommend", "top-n items for a user history file");
    for (CLI::App* cmd : {prepare, train, tune, evaluate, recommend}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        tenrec::cli::RunConfig cfg =
            config_path.empty() ? tenrec::cli::RunConfig::from_overrides(overrides)
                                : tenrec::cli::RunConfig::load(config_path, overrides);
        std::string summary;
        if (prepare->parsed()) summary = tenrec::cli::cmd_prepare(cfg);
        if (train->parsed()) summary = tenrec::cli::cmd_train(cfg);
        if (tune->parsed()) summary = tenrec::cli::cmd_tune(cfg);
        if (evaluate->parsed()) summary = tenrec::cli::cmd_evaluate(cfg);
        if (recommend->parsed()) summary = tenrec::cli::cmd_recommend(cfg);
        std::cout << summary << '\n';
        return 0;
    } catch (const tenrec::Error& e) {
        // what() already carries "<code>: <message>".
        std::cerr << "ERROR " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR Internal " << e.what() << '\n';
        return 2;
    }
}
