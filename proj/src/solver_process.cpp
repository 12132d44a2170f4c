#include "hoconc/smt.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace hoconc {

namespace {

struct Fd {
  int fd = -1;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

void ignore_sigpipe() {
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

std::optional<std::string> run_solver_process(const SolverConfig& config, const std::string& script) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw SolverSpawnError("pipe: " + std::string(std::strerror(errno)));
  Fd in_r{in_pipe[0]}, in_w{in_pipe[1]};
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw SolverSpawnError("pipe: " + std::string(std::strerror(errno)));
  Fd out_r{out_pipe[0]}, out_w{out_pipe[1]};

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_r.fd, 0);
  posix_spawn_file_actions_adddup2(&actions, out_w.fd, 1);
  posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);

  std::vector<std::string> argv_store{config.path};
  argv_store.insert(argv_store.end(), config.args.begin(), config.args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, config.path.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw SolverSpawnError("cannot start solver '" + config.path + "': " + std::strerror(rc));
  }
  in_r.reset();
  out_w.reset();

  const auto deadline = std::chrono::steady_clock::now() + config.timeout;
  std::size_t written = 0;
  std::string output;
  bool timed_out = false;
  ::fcntl(in_w.fd, F_SETFL, O_NONBLOCK);
  for (;;) {
    pollfd fds[2];
    int n = 0;
    if (in_w.fd >= 0) fds[n++] = {in_w.fd, POLLOUT, 0};
    fds[n++] = {out_r.fd, POLLIN, 0};
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    int ready = ::poll(fds, static_cast<nfds_t>(n), static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int k = 0; k < n; ++k) {
      if (!fds[k].revents) continue;
      if (fds[k].fd == in_w.fd) {
        ssize_t w = ::write(in_w.fd, script.data() + written, script.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN) written = script.size();
        if (written >= script.size()) in_w.reset();
      } else {
        char buf[4096];
        ssize_t r = ::read(out_r.fd, buf, sizeof buf);
        if (r > 0) {
          output.append(buf, static_cast<std::size_t>(r));
        } else if (r == 0 || errno != EAGAIN) {
          out_r.reset();
        }
      }
    }
    if (out_r.fd < 0) break;
  }
  in_w.reset();
  out_r.reset();
  if (timed_out) ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) return std::nullopt;
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && output.empty()) {
    throw SolverSpawnError("cannot start solver '" + config.path + "'");
  }
  return output;
}

}  // namespace hoconc
