#include "exeos/pipeline/process.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace exeos::pipeline {

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& working_dir,
                          std::chrono::milliseconds timeout) {
  ProcessResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    return result;
  }

  int fds[2];
  if (pipe(fds) != 0) {
    result.spawn_failed = true;
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    result.spawn_failed = true;
    return result;
  }

  if (pid == 0) {
    // Child: own process group so a timeout can kill the whole tree.
    setpgid(0, 0);
    close(fds[0]);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[1]);
    if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) _exit(127);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }

  close(fds[1]);
  fcntl(fds[0], F_SETFL, O_NONBLOCK);

  auto deadline = std::chrono::steady_clock::now() + timeout;
  bool running = true;
  int status = 0;
  char buf[4096];
  while (running) {
    for (;;) {
      ssize_t n = read(fds[0], buf, sizeof buf);
      if (n > 0)
        result.output.append(buf, std::size_t(n));
      else
        break;
    }
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      running = false;
    } else if (std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      running = false;
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
  }

  // Drain whatever arrived between the last poll and exit.
  for (;;) {
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n > 0)
      result.output.append(buf, std::size_t(n));
    else if (n == 0 || (errno != EINTR && errno != EAGAIN))
      break;
    else if (errno == EAGAIN)
      break;
  }
  close(fds[0]);

  if (result.timed_out)
    result.exit_code = -1;
  else if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    result.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  return result;
}

}  // namespace exeos::pipeline
