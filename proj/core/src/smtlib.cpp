#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "patcheck/oracle.hpp"

namespace patcheck {

namespace {

std::string smt_int(const Integer& v) { return v < 0 ? "(- " + Integer(-v).str() + ")" : v.str(); }

class Emitter {
 public:
  explicit Emitter(const Translation& t) {
    for (const auto& s : t.symbols) names_[s.key] = "a" + std::to_string(names_.size());
  }

  const std::string& name(const std::string& key) {
    auto it = names_.find(key);
    if (it == names_.end()) it = names_.emplace(key, "a" + std::to_string(names_.size())).first;
    return it->second;
  }

  std::string term(const LinearTerm& t) {
    std::vector<std::string> parts;
    for (const auto& [k, c] : t.coeffs) parts.push_back(c == 1 ? name(k) : "(* " + smt_int(c) + " " + name(k) + ")");
    if (t.constant != 0 || parts.empty()) parts.push_back(smt_int(t.constant));
    if (parts.size() == 1) return parts[0];
    std::string s = "(+";
    for (const auto& p : parts) s += " " + p;
    return s + ")";
  }

  std::string formula(const Formula& f) {
    auto nary = [&](const char* op) {
      std::string s = std::string("(") + op;
      for (const auto& a : f.args) s += " " + formula(a);
      return s + ")";
    };
    switch (f.kind) {
      case Formula::Kind::True: return "true";
      case Formula::Kind::False: return "false";
      case Formula::Kind::BoolVar: return name(f.key);
      case Formula::Kind::Not: return "(not " + formula(f.args[0]) + ")";
      case Formula::Kind::And: return nary("and");
      case Formula::Kind::Or: return nary("or");
      case Formula::Kind::Iff: return nary("=");
      case Formula::Kind::Cmp: {
        std::string l = term(f.lhs), r = term(f.rhs);
        switch (f.op) {
          case CmpOp::Eq: return "(= " + l + " " + r + ")";
          case CmpOp::Ne: return "(not (= " + l + " " + r + "))";
          case CmpOp::Lt: return "(< " + l + " " + r + ")";
          case CmpOp::Le: return "(<= " + l + " " + r + ")";
          case CmpOp::Gt: return "(> " + l + " " + r + ")";
          case CmpOp::Ge: return "(>= " + l + " " + r + ")";
        }
      }
    }
    return "true";
  }

 private:
  std::map<std::string, std::string> names_;
};

}  // namespace

std::string emit_smtlib(const Translation& t) {
  Emitter em(t);
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  for (const auto& s : t.symbols) {
    out << "(declare-const " << em.name(s.key) << (s.is_bool ? " Bool" : " Int") << ")";
    out << " ; " << s.key << "\n";
  }
  for (const auto& f : t.conjuncts) out << "(assert " << em.formula(f) << ")\n";
  out << "(check-sat)\n(exit)\n";
  return out.str();
}

ProcessResult run_solver_process(const std::string& command_template, const std::string& input,
                                 std::chrono::milliseconds timeout) {
  ProcessResult result;
  std::string path = (std::filesystem::temp_directory_path() / "patcheck-XXXXXX.smt2").string();
  int fd = ::mkstemps(path.data(), 5);
  if (fd < 0) {
    result.failed_to_start = true;
    return result;
  }
  {
    std::size_t off = 0;
    while (off < input.size()) {
      ssize_t n = ::write(fd, input.data() + off, input.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  struct Cleanup {
    std::string p;
    ~Cleanup() { std::remove(p.c_str()); }
  } cleanup{path};

  std::string command = command_template;
  if (auto pos = command.find("{file}"); pos != std::string::npos) {
    command.replace(pos, 6, "'" + path + "'");
  } else {
    command += " '" + path + "'";
  }

  int pipefd[2];
  if (::pipe(pipefd) != 0) {
    result.failed_to_start = true;
    return result;
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    result.failed_to_start = true;
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      ::dup2(devnull, STDIN_FILENO);
      ::dup2(devnull, STDERR_FILENO);
    }
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(pipefd[1]);

  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd p{pipefd[0], POLLIN, 0};
    int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) {
      result.timed_out = rc == 0;
      break;
    }
    ssize_t n = ::read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;
    result.output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(pipefd[0]);
  if (result.timed_out) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
    if (result.exit_code == 127 && result.output.empty()) result.failed_to_start = true;
  } else {
    result.exit_code = -1;
  }
  return result;
}

SolverVerdict parse_solver_output(const ProcessResult& r) {
  if (r.failed_to_start) return SolverVerdict::unknown("solver could not be started");
  if (r.timed_out) return SolverVerdict::unknown("solver timeout");
  std::istringstream in(r.output);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string word = line.substr(b, e - b + 1);
    if (word == "unsat") return SolverVerdict::unsat("external solver");
    if (word == "sat") return SolverVerdict::sat();
    return SolverVerdict::unknown("unexpected solver output: " + word);
  }
  return SolverVerdict::unknown("empty solver output");
}

}  // namespace patcheck
