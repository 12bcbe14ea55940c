#include <gtest/gtest.h>

#include <sstream>

#include "provql/ingest.hpp"

using namespace provql;

namespace {

std::string line(const std::string& syscall, const std::string& object, bool success = true, Nanos ts = 100,
                 const std::string& exename = "curl", int pid = 1001) {
    return R"({"syscall":")" + syscall + R"(","success":)" + (success ? "true" : "false") + R"(,"ts":)" +
           std::to_string(ts) + R"(,"te":)" + std::to_string(ts + 5) + R"(,"bytes":10,"host":"h1","subject":{"exename":")" +
           exename + R"(","exepath":"/usr/bin/)" + exename + R"(","pid":)" + std::to_string(pid) +
           R"(,"user":"u","group":"g","cmdline":"x"},"object":)" + object + "}";
}

const std::string kFile = R"({"kind":"file","path":"/etc/passwd"})";
const std::string kSock =
    R"({"kind":"network","srcip":"10.0.0.1","srcport":4242,"dstip":"20.69.152.188","dstport":80,"protocol":"tcp"})";

Store ingest_text(const std::string& text, IngestStats& stats, ReductionConfig cfg = {}) {
    std::istringstream in(text);
    const auto records = parse_jsonl(in, stats);
    return ingest_batch(Store("h1", {}, {}), records, cfg, stats);
}

}  // namespace

TEST(Ingest, ParsesOneRecord) {
    const RawRecord r = parse_record(line("read", kFile));
    EXPECT_EQ(r.syscall, "read");
    EXPECT_EQ(r.subject.exename, "curl");
    EXPECT_EQ(std::get<FileAttrs>(r.object).name, "passwd");
    EXPECT_EQ(parse_record(to_jsonl(r)).subject, r.subject);
}

TEST(Ingest, ErrorsNameTheField) {
    try {
        parse_record(R"({"syscall":"read","success":true,"ts":1,"te":2,"subject":{"pid":1},"object":{"kind":"file","path":"/a"}})");
        FAIL();
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("subject.exename"), std::string::npos);
    }
    EXPECT_THROW(parse_record(line("read", R"({"kind":"file"})")), IngestError);
    EXPECT_THROW(identity_key(EntityKind::Network, NetworkAttrs{"", 1, "b", 2, "tcp"}), IngestError);
}

TEST(Ingest, ReadFlowsObjectToSubject) {
    IngestStats stats;
    const Store s = ingest_text(line("read", kFile), stats);
    ASSERT_EQ(s.event_count(), 1u);
    EXPECT_EQ(s.entity(s.src(0)).key, "/etc/passwd");
    EXPECT_EQ(s.entity(s.dst(0)).key, "curl:1001");
    EXPECT_EQ(s.event(0).op, Op::Read);
    EXPECT_EQ(s.event(0).category, EventCategory::ProcessToFile);
}

TEST(Ingest, WriteFlowsSubjectToObject) {
    IngestStats stats;
    const Store s = ingest_text(line("write", kSock), stats);
    ASSERT_EQ(s.event_count(), 1u);
    EXPECT_EQ(s.entity(s.src(0)).key, "curl:1001");
    EXPECT_EQ(s.entity(s.dst(0)).key, "10.0.0.1:4242:20.69.152.188:80:tcp");
    EXPECT_EQ(s.event(0).category, EventCategory::ProcessToNetwork);
}

TEST(Ingest, DeduplicatesEntities) {
    IngestStats stats;
    // Far apart in time so reduction keeps both events.
    const Store s = ingest_text(line("read", kFile, true, 0) + "\n" + line("write", kSock, true, 10 * kNanosPerSecond), stats);
    EXPECT_EQ(s.event_count(), 2u);
    EXPECT_EQ(s.entity_count(), 3u);
    EXPECT_EQ(s.dst(0), s.src(1));
}

TEST(Ingest, FiltersFailedGarbageAndUnknown) {
    IngestStats stats;
    const std::string text = line("read", kFile, false) + "\n{not json\n" + line("ioctl", kFile) + "\n" +
                             line("fork", kFile) + "\n\n" + line("read", kFile, true, 50);
    const Store s = ingest_text(text, stats);
    EXPECT_EQ(stats.failed_filtered, 1u);
    EXPECT_EQ(stats.malformed, 1u);
    EXPECT_EQ(stats.unknown_syscall, 1u);
    EXPECT_EQ(stats.inconsistent, 1u);
    EXPECT_EQ(s.event_count(), 1u);
    ASSERT_EQ(stats.errors.size(), 1u);
    EXPECT_EQ(stats.errors[0].rfind("line 2:", 0), 0u);
}

TEST(Ingest, ReducesRepeatedReads) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += line("read", kFile, true, i * kNanosPerSecond / 2) + "\n";
    IngestStats stats;
    const Store s = ingest_text(text, stats);
    ASSERT_EQ(s.event_count(), 1u);
    EXPECT_EQ(s.event(0).amount, 100u);
    EXPECT_EQ(stats.reduction.merged(), 9u);
    IngestStats strict;
    EXPECT_EQ(ingest_text(text, strict, {0}).event_count(), 10u);
}

TEST(Ingest, RenameKeepsOldPathAsNote) {
    IngestStats stats;
    const Store s = ingest_text(line("rename", R"({"kind":"file","path":"/b","oldpath":"/a"})"), stats);
    ASSERT_EQ(s.event_count(), 1u);
    EXPECT_EQ(s.event(0).note, "/a");
    EXPECT_EQ(s.entity(s.dst(0)).key, "/b");
}

TEST(Ingest, DeterministicAndAppendsAgainstBase) {
    const std::string text = line("read", kFile) + "\n" + line("write", kSock, true, 9 * kNanosPerSecond);
    IngestStats a, b;
    EXPECT_EQ(ingest_text(text, a).events(), ingest_text(text, b).events());

    Database db(Store("h1", {}, {}));
    std::istringstream first(line("read", kFile));
    ingest_stream(db, first, {});
    std::istringstream second(line("read", kFile, true, 60 * kNanosPerSecond));
    const auto stats = ingest_stream(db, second, {});
    EXPECT_EQ(stats.new_entities, 0u);
    EXPECT_EQ(db.snapshot()->entity_count(), 2u);
    EXPECT_EQ(db.snapshot()->event_count(), 2u);
    EXPECT_EQ(db.snapshot()->event(1).id, 1u);
}
