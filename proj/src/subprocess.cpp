#include "csd/detail/subprocess.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace csd::detail {

namespace {

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fd[0] >= 0) ::close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) ::close(fd[1]);
        fd[1] = -1;
    }
};

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, double deadline_s) {
    if (argv.empty()) throw std::invalid_argument("empty command line");
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    Pipe out, err, status;
    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
        ::dup2(out.fd[1], STDOUT_FILENO);
        ::dup2(err.fd[1], STDERR_FILENO);
        ::execvp(args[0], args.data());
        int code = errno;
        [[maybe_unused]] auto n = ::write(status.fd[1], &code, sizeof code);
        ::_exit(127);
    }
    out.close_write();
    err.close_write();
    status.close_write();

    int exec_errno = 0;
    if (::read(status.fd[0], &exec_errno, sizeof exec_errno) == static_cast<ssize_t>(sizeof exec_errno)) {
        ::waitpid(pid, nullptr, 0);
        throw ExecutableNotFound("cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
    }

    ProcessResult result;
    const auto deadline = start + std::chrono::duration<double>(deadline_s);
    pollfd fds[2] = {{out.fd[0], POLLIN, 0}, {err.fd[0], POLLIN, 0}};
    std::string* sinks[2] = {&result.out, &result.err};
    int open_streams = 2;
    char buf[4096];
    while (open_streams > 0) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            ::kill(pid, SIGKILL);
            result.killed = true;
            break;
        }
        const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
        const int ready = ::poll(fds, 2, static_cast<int>(std::min<long long>(wait_ms, 1000)));
        if (ready < 0) {
            if (errno == EINTR) continue;
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            throw std::runtime_error(std::string("poll: ") + std::strerror(errno));
        }
        for (int s = 0; s < 2; ++s) {
            if (fds[s].fd < 0 || !(fds[s].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            const ssize_t n = ::read(fds[s].fd, buf, sizeof buf);
            if (n > 0) {
                sinks[s]->append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[s].fd = -1;
                --open_streams;
            }
        }
    }

    int wstatus = 0;
    while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
    }
    // a killed child may leave buffered output behind
    for (int s = 0; s < 2; ++s) {
        while (fds[s].fd >= 0) {
            const ssize_t n = ::read(fds[s].fd, buf, sizeof buf);
            if (n > 0) {
                sinks[s]->append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[s].fd = -1;
            }
        }
    }
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (WIFEXITED(wstatus)) {
        result.exit_code = WEXITSTATUS(wstatus);
    } else {
        result.signaled = true;
    }
    return result;
}

} // namespace csd::detail
