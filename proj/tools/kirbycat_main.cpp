#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kirbycat/errors.hpp"
#include "kirbycat/script.hpp"

namespace {

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kirbycat: Kirby calculus, event sites and twisted operads"};
  std::string path = "-";
  std::uint64_t seed = 0;
  std::size_t depth = 4;
  std::string format = "text";
  bool print_only = false;
  app.add_option("script", path, "script file, - for stdin");
  app.add_option("--seed", seed, "seed for randomized harnesses");
  app.add_option("--depth", depth, "default search depth for equiv")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_flag("--print", print_only, "print the parsed script and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string text;
  if (path == "-") {
    text = slurp(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read " << path << "\n";
      return 2;
    }
    text = slurp(in);
  }

  kirbycat::Script script;
  try {
    script = kirbycat::parse(text);
  } catch (const kirbycat::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (print_only) {
    std::cout << kirbycat::print(script);
    return 0;
  }

  kirbycat::RunOptions options;
  options.seed = seed;
  options.depth = depth;
  options.format = format == "machine" ? kirbycat::OutputFormat::Machine
                                       : kirbycat::OutputFormat::Text;
  try {
    kirbycat::run(script, options, [&](const kirbycat::CommandResult& r) {
      std::cout << kirbycat::render(r, options.format) << "\n";
    });
  } catch (const kirbycat::Error& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
