// Writes the synthetic German-like fixture corpus.
#include <CLI11.hpp>

#include <iostream>

#include "textcat/error.hpp"
#include "textcat/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic fixture corpus"};
  textcat::FixtureSpec spec;
  std::string out;
  app.add_option("out", out, "Output directory")->required();
  app.add_option("--classes", spec.classes);
  app.add_option("--train-per-class", spec.train_per_class);
  app.add_option("--test-per-class", spec.test_per_class);
  app.add_option("--class-stems", spec.class_stems);
  app.add_option("--shared-stems", spec.shared_stems);
  app.add_option("--seed", spec.seed);
  CLI11_PARSE(app, argc, argv);
  try {
    textcat::write_fixture(textcat::generate_fixture(spec), out);
  } catch (const textcat::Error& e) {
    std::cerr << "textcat-fixture: " << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}
