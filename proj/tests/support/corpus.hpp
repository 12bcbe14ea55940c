#pragma once
// Hand-written TSTL corpus.

#include <array>
#include <string_view>

namespace provql::testing {

// The progressive data-leakage investigation, one statement per entry.
inline constexpr std::array<std::string_view, 8> kInvestigation = {
    R"(search from db(host1) where e1{name="curl", type=process}, e2{path like "%.tar"}, e3{type=network} with e2[read]->e1 &&[<1s] e1[write]->e3 return * as poi1;)",
    R"(g2 = back track poi1 from db(host1) exclude nodes where name="vscode" limit step 2;)",
    R"(search from g2 where e1{name="scp"}, e2{type=network} with e2[read]->e1 return *;)",
    R"(g3 = back track where exename="curl" from db(host1) exclude nodes where name="vscode";)",
    R"(search from g3 where e1{srcip="20.69.152.188" || dstip="20.69.152.188"}, e2{type=process} with e1[read]->e2 return * as poi2;)",
    R"(g4 = g2 | g3;)",
    R"(g5 = forward track poi2 from g4 exclude nodes where name="vscode";)",
    R"(display g5;)",
};

inline constexpr std::array<std::string_view, 26> kGrammarCorpus = {
    R"(search from db(h) where e1{name="bash"}, e2{type=file} with e1[write]->e2 return *;)",
    R"(search from db(h) where e1{pid > 100 && pid <= 200}, e2{type=network} with e1->e2 return *;)",
    R"(search from db(h) where e1{exename="sshd"}, e2{exename="bash"} with e1[fork]->e2 return * as shells;)",
    R"(search from db(h) where e1{path like "/etc/%"}, e2{type=process} with e1[readv]->e2 return *;)",
    R"(search from db(h) where e1{!(name="cron")}, e2{type=file} with e1[rename]->e2 return *;)",
    R"(search from db(h) where e1{(name="a" || name="b") && type=process}, e2{type=process} with e1[clone]->e2 return *;)",
    R"(search from db(h) where e1{type=process}, e2{dstport=443}, e3{dstport=80} with e1[sendto]->e2 || e1[sendto]->e3 return *;)",
    R"(search from db(h) where e1{type=network}, e2{type=process}, e3{type=file} with e1[recvfrom]->e2 &&[500ms] e2[write]->e3 return *;)",
    R"(search from db(h) where e1{type=file}, e2{type=process}, e3{type=network} with e1[read]->e2 &&[<=2m] e2[writev]->e3 return *;)",
    R"(search from db(h) where e1{name="x"}, e2{name="y"}, e3{name="z"}, e4{name="w"} with e1->e2 && e2->e3 && e3->e4 return *;)",
    R"(search from db(h) where e1{srcip!="10.0.0.1"}, e2{type=process} with e1[read]->e2 return *;)",
    R"(search from db(h) where e1{cmdline like "%-c%"}, e2{exepath="/bin/sh"} with e1[execve]->e2 return *;)",
    R"(search from g1 where e1{srcport >= 1024, srcport < 65536}, e2{type=process} with e1[read]->e2 return *;)",
    R"(search from db(h) where e1{type=process}, e2{type=file}, e3{type=file} with (e1[write]->e2 || e1[write]->e3) &&[<1s] e1[read]->e2 return *;)",
    R"(back track where name="payload" from db(h);)",
    R"(g = forward track where path="/tmp/x" from db(h) include nodes where type=process limit step 4;)",
    R"(g = back track where type=network && dstip="1.2.3.4" from db(h) include edges where amount > 1000;)",
    R"(g = back track poi from g0 include nodes where type=file, edges where optype="read" exclude edges where starttime < 5 limit step 3, time 10;)",
    R"(forward track poi from db(h) exclude nodes where name like "vs%" edges where endtime >= 100 limit time 30;)",
    R"(g = back track where id = 7 from db(h) exclude nodes where srcid = 1 || dstid != 2 limit step 1;)",
    R"(g6 = (g1 | g2) & g3;)",
    R"(g7 = g1 - g2 - g3;)",
    R"(display g1 & (g2 | g3);)",
    R"(export g5 as "g5.json";)",
    R"(export g1 | g2 as "out/graph.dot";)",
    "// comment line\nsearch from db(h) where e1{name=\"a\"}, // trailing\n e2{name=\"b\"} with e1->e2 return *;",
};

}  // namespace provql::testing
