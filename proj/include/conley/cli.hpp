#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "conley/io.hpp"

namespace conley {

namespace cli_detail {

enum Exit : int { ok = 0, constraint_failure = 1, input_error = 2 };

/// Line of the first character of every value in a JSON document, keyed by
/// JSON pointer. The text must already have parsed successfully.
class PointerLines {
public:
  explicit PointerLines(const std::string& text) : text_(text) { value(""); }

  /// Line of the deepest recorded prefix of `pointer`.
  std::size_t line_of(std::string pointer) const {
    for (;;) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }
  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }
  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) out += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
    return out;
  }
  void value(const std::string& pointer) {
    skip_ws();
    lines_.emplace(pointer, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      for (std::size_t index = 0;; ++index) {
        skip_ws();
        if (pos_ >= text_.size()) return;
        if (text_[pos_] == close) {
          ++pos_;
          return;
        }
        if (text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
        std::string key = std::to_string(index);
        if (c == '{') {
          key = string_token();
          skip_ws();
          ++pos_; // ':'
        }
        value(pointer + "/" + escape(key));
      }
    }
    if (c == '"') {
      string_token();
      return;
    }
    while (pos_ < text_.size() && std::string(",]}").find(text_[pos_]) == std::string::npos &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

struct InputError {
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open file"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs `fn` and turns a ParseError into "file:line: pointer: message".
template <class Fn>
auto located(const std::string& file, const std::string& text, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    std::string where = file;
    if (e.path().empty()) {
      where += ": ";
    } else {
      const auto line = PointerLines(text).line_of(e.path());
      where += line ? ":" + std::to_string(line) + ": " : ": ";
    }
    throw InputError{where + e.what()};
  }
}

inline AnyInstance load_instance(const std::string& file) {
  const auto text = read_file(file);
  return located(file, text, [&] { return parse_instance(parse_json(text)); });
}

inline Poset load_poset(const std::string& file) {
  const auto text = read_file(file);
  return located(file, text, [&] { return parse_poset(parse_json(text)); });
}

struct Options {
  std::string instance;
  std::string solution;
  std::string output = "text";
  std::size_t jobs = 1;
  bool symmetric = false;
  bool adjacent = false;
  bool count_only = false;
};

inline int cmd_intervals(const Options& o, std::ostream& out) {
  const Poset poset = load_poset(o.instance);
  const auto ivs = poset.intervals();
  std::vector<std::vector<Interval>> pairs, triples;
  if (o.adjacent) {
    auto nonempty = [](const std::vector<Interval>& t) {
      for (const auto& iv : t)
        if (iv.empty()) return false;
      return true;
    };
    for (auto& t : poset.adjacent_tuples(2))
      if (nonempty(t)) pairs.push_back(std::move(t));
    for (auto& t : poset.adjacent_tuples(3))
      if (nonempty(t)) triples.push_back(std::move(t));
  }
  auto tuple_text = [&](const std::vector<Interval>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + poset.format(t[i]);
    return s + ")";
  };
  if (o.output == "json") {
    auto to_json = [&](const std::vector<Interval>& list) {
      Json a = Json::array();
      for (const auto& iv : list) {
        Json members = Json::array();
        for (auto p : iv.members()) members.push_back(poset.name(p));
        a.push_back(std::move(members));
      }
      return a;
    };
    Json doc;
    doc["intervals"] = to_json(ivs);
    if (o.adjacent) {
      doc["adjacent_pairs"] = Json::array();
      for (const auto& t : pairs) doc["adjacent_pairs"].push_back(to_json(t));
      doc["adjacent_triples"] = Json::array();
      for (const auto& t : triples) doc["adjacent_triples"].push_back(to_json(t));
    }
    out << dump_json(doc) << "\n";
    return ok;
  }
  auto count = [](std::size_t n, const char* noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
  };
  out << count(ivs.size(), "interval") << "\n";
  for (const auto& iv : ivs) out << "  " << poset.format(iv) << "\n";
  if (o.adjacent) {
    out << count(pairs.size(), "adjacent pair") << "\n";
    for (const auto& t : pairs) out << "  " << tuple_text(t) << "\n";
    out << count(triples.size(), "adjacent triple") << "\n";
    for (const auto& t : triples) out << "  " << tuple_text(t) << "\n";
  }
  return ok;
}

inline int cmd_enumerate(const Options& o, bool count_command, std::ostream& out) {
  const auto any = load_instance(o.instance);
  return std::visit(
      [&](const auto& inst) -> int {
        SearchOptions so;
        so.jobs = o.jobs;
        so.symmetric = o.symmetric;
        if (o.symmetric && !inst.symmetry())
          throw InputError{o.instance + ": --symmetric needs a \"symmetry\" section"};
        if (count_command || o.count_only) {
          SearchStats stats;
          const auto n = count(inst, so, &stats);
          if (o.output == "json" && !o.count_only)
            out << dump_json(Json{{"count", n},
                                  {"stats", {{"explored", stats.explored},
                                             {"pruned", stats.pruned}}}})
                << "\n";
          else
            out << n << "\n";
          return ok;
        }
        const auto set = enumerate(inst, so);
        if (o.output == "json")
          out << dump_json(solutions_to_json(inst, set, o.symmetric)) << "\n";
        else
          out << solutions_to_text(inst, set, o.symmetric);
        return ok;
      },
      any);
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const auto any = load_instance(o.instance);
  const auto text = read_file(o.solution);
  const Json doc = located(o.solution, text, [&] { return parse_json(text); });
  return std::visit(
      [&](const auto& inst) -> int {
        using R = std::decay_t<decltype(inst.ring())>;
        std::vector<BlockMap<R>> maps;
        try {
          maps = parse_solutions(inst, doc);
        } catch (const ShapeMismatch& e) {
          throw InputError{o.solution + ": " + e.what()};
        }
        bool all = true;
        Json reports = Json::array();
        std::string text_out;
        for (std::size_t i = 0; i < maps.size(); ++i) {
          VerifyReport rep;
          try {
            rep = verify(inst, maps[i]);
          } catch (const ShapeMismatch& e) {
            throw InputError{o.solution + ": " + e.what()};
          }
          all = all && rep.passed();
          reports.push_back(report_to_json(rep));
          if (maps.size() > 1) text_out += "solution " + std::to_string(i + 1) + "\n";
          text_out += report_to_text(rep);
        }
        if (o.output == "json") {
          Json j = maps.size() == 1 ? reports[0] : Json{{"passed", all}, {"reports", reports}};
          out << dump_json(j) << "\n";
        } else {
          out << text_out;
        }
        return all ? ok : constraint_failure;
      },
      any);
}

} // namespace cli_detail

/// Entry point of the command-line tool; `args` excludes the program name.
/// Returns 0 on success, 1 when verify finds a violated constraint, 2 on
/// input errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  Options o;
  CLI::App app{"Enumerate and verify connection matrices of graded module braids", "conley"};
  app.require_subcommand(1);
  auto output_opt = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto jobs_opt = [&](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
  };

  auto* intervals = app.add_subcommand("intervals", "List the intervals of the poset");
  intervals->add_option("instance", o.instance, "Instance file")->required();
  intervals->add_flag("--adjacent", o.adjacent, "Also list adjacent pairs and triples");
  output_opt(intervals);

  auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate all connection matrices");
  enumerate_cmd->add_option("instance", o.instance, "Instance file")->required();
  enumerate_cmd->add_flag("--symmetric", o.symmetric, "Only symmetric solutions");
  enumerate_cmd->add_flag("--count-only", o.count_only, "Print only the number of solutions");
  output_opt(enumerate_cmd);
  jobs_opt(enumerate_cmd);

  auto* count_cmd = app.add_subcommand("count", "Count connection matrices");
  count_cmd->add_option("instance", o.instance, "Instance file")->required();
  count_cmd->add_flag("--symmetric", o.symmetric, "Only symmetric solutions");
  output_opt(count_cmd);
  jobs_opt(count_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check a block map against an instance");
  verify_cmd->add_option("instance", o.instance, "Instance file")->required();
  verify_cmd->add_option("solution", o.solution, "Solution file")->required();
  output_opt(verify_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "conley: " << e.what() << "\n";
    return input_error;
  }

  try {
    if (intervals->parsed()) return cmd_intervals(o, out);
    if (enumerate_cmd->parsed()) return cmd_enumerate(o, false, out);
    if (count_cmd->parsed()) return cmd_enumerate(o, true, out);
    return cmd_verify(o, out);
  } catch (const InputError& e) {
    err << "conley: " << e.message << "\n";
  } catch (const UnsupportedRing& e) {
    err << "conley: " << e.what() << "\n"
        << "conley: use 'conley verify <instance> <solution>' to check a candidate matrix\n";
  } catch (const Error& e) {
    err << "conley: " << o.instance << ": " << e.what() << "\n";
  }
  return input_error;
}

} // namespace conley
