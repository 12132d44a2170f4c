#include "hoconc/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace hoconc {

std::optional<Expectation> read_expectation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find("expect:");
    if (pos == std::string::npos) continue;
    auto head = line.substr(0, pos);
    if (head.find(';') == std::string::npos) continue;
    std::istringstream rest(line.substr(pos + 7));
    std::string word;
    rest >> word;
    if (word == "bug") return Expectation::Bug;
    if (word == "no-bug") return Expectation::NoBug;
  }
  return std::nullopt;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<CorpusEntry> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".sexp") continue;
    std::ifstream in(e.path());
    std::stringstream buf;
    buf << in.rdbuf();
    out.push_back({e.path(), e.path().stem().string(), read_expectation(buf.str())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

namespace {

CorpusResult run_one(const CorpusEntry& entry, const CorpusOptions& options, SearchObserver* shared) {
  CorpusResult r{entry, std::nullopt, {}, false};
  std::ifstream in(entry.file);
  if (!in) {
    r.error = "cannot read " + entry.file.string();
    return r;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Program program;
  try {
    program = parse_program(buf.str());
  } catch (const Error& e) {
    r.error = e.what();
    return r;
  }
  ObserverList observers;
  observers.add(shared);
  std::ofstream trace;
  std::optional<JsonlTraceWriter> writer;
  if (options.trace_dir) {
    trace.open(*options.trace_dir / (entry.name + ".jsonl"));
    writer.emplace(trace);
    observers.add(&*writer);
  }
  r.report = run_search(program, options.config, &observers);
  const bool found = r.report->verdict == Verdict::BugFound;
  r.met = !entry.expect || (*entry.expect == Expectation::Bug) == found;
  return r;
}

}  // namespace

std::vector<CorpusResult> run_corpus(const std::vector<CorpusEntry>& entries, const CorpusOptions& options) {
  if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);
  std::vector<std::optional<CorpusResult>> slots(entries.size());
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) slots[i] = run_one(entries[i], options, options.observer);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, entries.size()); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next++) < entries.size();) {
          try {
            slots[i] = run_one(entries[i], options, nullptr);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<CorpusResult> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string format_summary(const std::vector<CorpusResult>& results, bool timing) {
  std::size_t width = 7;
  for (const auto& r : results) width = std::max(width, r.entry.name.size());
  std::ostringstream out;
  auto row = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d,
                 const std::string& e, const std::string& f) {
    std::string line = a + std::string(width - a.size() + 2, ' ');
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-16s %10s %8s  %-7s  %s", b.c_str(), c.c_str(), d.c_str(), e.c_str(),
                  f.c_str());
    line += buf;
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  };
  row("program", "verdict", "iterations", "seconds", "expect", "status");
  std::size_t unmet = 0;
  for (const auto& r : results) {
    std::string expect = !r.entry.expect ? "-" : *r.entry.expect == Expectation::Bug ? "bug" : "no-bug";
    if (!r.report) {
      ++unmet;
      row(r.entry.name, "parse-error", "-", "-", expect, "FAIL " + r.error);
      continue;
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.report->stats.seconds);
    if (!r.met) ++unmet;
    row(r.entry.name, std::string(to_string(r.report->verdict)), std::to_string(r.report->stats.iterations),
        timing ? secs : "-", expect, r.met ? "ok" : "FAIL");
  }
  out << results.size() << " programs, " << unmet << " unmet\n";
  return out.str();
}

}  // namespace hoconc
