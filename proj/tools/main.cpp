#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace tokencore;
  using namespace tokencore::cli;

  CLI::App app{"tokencore: token-level text anomaly detection with a memory bank"};
  app.require_subcommand(1);

  InjectOptions inject;
  SplitOptions split;
  EmbedOptions embed;
  BankOptions bank;
  ScoreOptions score;
  EvalOptions eval;
  add_inject(app, inject);
  add_split(app, split);
  add_embed(app, embed);
  add_bank(app, bank);
  add_score(app, score);
  add_eval(app, eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (app.got_subcommand("inject")) return run_inject(inject);
    if (app.got_subcommand("split")) return run_split(split);
    if (app.got_subcommand("embed")) return run_embed(embed);
    if (app.got_subcommand("bank")) return run_bank(bank);
    if (app.got_subcommand("score")) return run_score(score);
    if (app.got_subcommand("eval")) return run_eval(eval);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kIo: return kExitFile;
      case ErrorKind::kDegenerate: return kExitDegenerate;
      default: return kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  }
  return kExitValidation;
}
