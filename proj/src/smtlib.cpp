#include "cgramap/smtlib.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "cgramap/errors.hpp"

namespace cgramap {

namespace {

std::string slot_var(std::size_t v) { return fmt::format("s_{}", v); }
std::string fold_var(std::size_t v) { return fmt::format("k_{}", v); }

std::string nary(const char* op, const std::vector<std::string>& args, const char* empty) {
  if (args.empty()) return empty;
  if (args.size() == 1) return args.front();
  std::string out = fmt::format("({}", op);
  for (const auto& a : args) out += " " + a;
  return out + ")";
}

std::string dependency_term(const DepConstraint& d) {
  const auto ss = slot_var(d.src), sd = slot_var(d.dst);
  const auto ks = fold_var(d.src), kd = fold_var(d.dst);
  const bool data = d.kind == DepKind::Data;
  return fmt::format("(or (and (= {ks} {kd}) ({c1} {sd} {ss})) (and (= (- {a} {b}) 1) ({c2} {sd} {ss})))",
                     fmt::arg("ks", ks), fmt::arg("kd", kd), fmt::arg("sd", sd), fmt::arg("ss", ss),
                     fmt::arg("a", data ? ks : kd), fmt::arg("b", data ? kd : ks), fmt::arg("c1", data ? ">" : "<="),
                     fmt::arg("c2", data ? "<=" : ">"));
}

std::string slot_indicator(std::size_t v, int slot) { return fmt::format("(ite (= {} {}) 1 0)", slot_var(v), slot); }

}  // namespace

std::string emit_smtlib(const TimeModel& model) {
  std::ostringstream out;
  const auto n = model.node_count();
  out << fmt::format("; time model: II={} SC={} nodes={} capacity={} degree={}\n", model.ii, model.stage_count, n,
                     model.capacity_bound, model.degree_bound);
  out << "(set-logic QF_LIA)\n";
  for (std::size_t v = 0; v < n; ++v) {
    out << "(declare-const " << slot_var(v) << " Int)\n";
    out << "(declare-const " << fold_var(v) << " Int)\n";
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::string> options;
    for (const auto& c : model.domains[v]) {
      options.push_back(fmt::format("(and (= {} {}) (= {} {}))", slot_var(v), c.slot, fold_var(v), c.fold));
    }
    out << "(assert " << nary("or", options, "false") << ")\n";
  }
  for (const auto& d : model.deps) out << "(assert " << dependency_term(d) << ")\n";
  for (int s = 0; s < model.ii; ++s) {
    std::vector<std::string> terms;
    for (std::size_t v = 0; v < n; ++v) terms.push_back(slot_indicator(v, s));
    out << fmt::format("(assert (<= {} {}))\n", nary("+", terms, "0"), model.capacity_bound);
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (int s = 0; s < model.ii; ++s) {
      std::vector<std::string> terms;
      for (NodeId u : model.neighbors[v]) terms.push_back(slot_indicator(u, s));
      out << fmt::format("(assert (<= {} {}))\n", nary("+", terms, "0"), model.degree_bound);
    }
  }
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

namespace {

struct Sexp {
  std::string atom;
  std::vector<Sexp> items;
  bool is_list = false;
};

class SexpReader {
 public:
  explicit SexpReader(const std::string& text) : text_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip();
    while (pos_ < text_.size()) {
      if (text_[pos_] == ')') {  // stray closer, e.g. after an error line
        ++pos_;
      } else {
        out.push_back(read());
      }
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Sexp read() {
    Sexp e;
    if (text_[pos_] == '(') {
      e.is_list = true;
      ++pos_;
      skip();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        e.items.push_back(read());
        skip();
      }
      if (pos_ < text_.size()) ++pos_;
      return e;
    }
    if (text_[pos_] == '"' || text_[pos_] == '|') {
      const char close = text_[pos_];
      const auto end = text_.find(close, pos_ + 1);
      const auto stop = end == std::string::npos ? text_.size() : end + 1;
      e.atom = text_.substr(pos_, stop - pos_);
      pos_ = stop;
      return e;
    }
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    e.atom = text_.substr(start, pos_ - start);
    return e;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::optional<long long> int_value(const Sexp& e) {
  if (!e.is_list) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(e.atom, &used);
      if (used == e.atom.size()) return v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  }
  if (e.items.size() == 2 && !e.items[0].is_list && e.items[0].atom == "-") {
    if (auto inner = int_value(e.items[1])) return -*inner;
  }
  return std::nullopt;
}

void collect_bindings(const Sexp& e, std::map<std::string, long long>& out) {
  if (!e.is_list) return;
  const auto& it = e.items;
  if (it.size() == 5 && !it[0].is_list && it[0].atom == "define-fun" && !it[1].is_list && it[2].is_list &&
      it[2].items.empty() && !it[3].is_list && it[3].atom == "Int") {
    if (auto v = int_value(it[4])) out[it[1].atom] = *v;
    return;
  }
  for (const auto& child : it) collect_bindings(child, out);
}

}  // namespace

std::map<std::string, long long> parse_smt_model(const std::string& text) {
  std::map<std::string, long long> out;
  for (const auto& e : SexpReader(text).read_all()) collect_bindings(e, out);
  return out;
}

TimeSolution solution_from_smt_model(const TimeModel& model, const std::map<std::string, long long>& bindings) {
  TimeSolution sol;
  sol.ii = model.ii;
  for (std::size_t v = 0; v < model.node_count(); ++v) {
    const auto s = bindings.find(slot_var(v));
    const auto k = bindings.find(fold_var(v));
    if (s == bindings.end() || k == bindings.end()) {
      throw InputError(fmt::format("solver model lacks a binding for node {}", v));
    }
    sol.assignment.push_back({static_cast<int>(s->second), static_cast<int>(k->second)});
  }
  return sol;
}

SmtRun run_smt_solver(const std::string& executable, const std::string& script) {
  namespace fs = std::filesystem;
  std::string name = (fs::temp_directory_path() / "cgramap-XXXXXX").string();
  const int fd = ::mkstemp(name.data());
  if (fd < 0) throw std::runtime_error("cannot create temporary SMT-LIB2 file");
  ::close(fd);
  {
    std::ofstream f(name);
    f << script;
  }
  SmtRun run;
  const std::string cmd = fmt::format("'{}' -smt2 '{}' 2>&1", executable, name);
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) run.raw_output.append(buf.data(), got);
    ::pclose(pipe);
  }
  fs::remove(name);

  std::istringstream lines(run.raw_output);
  std::string first;
  std::getline(lines, first);
  while (!first.empty() && std::isspace(static_cast<unsigned char>(first.back()))) first.pop_back();
  run.verdict = (first == "sat" || first == "unsat" || first == "unknown") ? first : "error";
  if (run.verdict == "sat") run.model = parse_smt_model(run.raw_output.substr(run.raw_output.find('\n') + 1));
  return run;
}

}  // namespace cgramap
