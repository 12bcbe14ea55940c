#include "provql/store.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace provql {

// ---------------------------------------------------------------------------
// RowSet / TimeBound
// ---------------------------------------------------------------------------

RowSet::RowSet(std::vector<Row> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

bool RowSet::contains(Row r) const { return std::binary_search(rows_.begin(), rows_.end(), r); }

RowSet RowSet::intersect(const RowSet& other) const {
    RowSet out;
    std::set_intersection(rows_.begin(), rows_.end(), other.rows_.begin(), other.rows_.end(),
                          std::back_inserter(out.rows_));
    return out;
}

bool TimeBound::admits(const Event& ev) const {
    const Nanos t = field == Field::Start ? ev.start : ev.end;
    return cmp == Cmp::Less ? t < instant : t > instant;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Store::Store(std::string source, std::vector<Entity> entities, std::vector<Event> events)
    : sources_{std::move(source)}, entities_(std::move(entities)), events_(std::move(events)) {
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (entities_[i].id != i) {
            throw ValidationError("entity ids must be dense: row " + std::to_string(i) + " has id " +
                                  std::to_string(entities_[i].id));
        }
    }
    src_.resize(events_.size());
    dst_.resize(events_.size());
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].id != i) {
            throw ValidationError("event ids must be dense: row " + std::to_string(i) + " has id " +
                                  std::to_string(events_[i].id));
        }
        src_[i] = events_[i].src;
        dst_[i] = events_[i].dst;
    }
    validate();
    build_indexes();
}

Store Store::from_graph(const EventGraph& graph) {
    Store s;
    s.dense_ids_ = false;
    s.sources_.clear();
    std::map<std::string, std::uint16_t> origin_of;
    auto origin = [&](const std::string& name) {
        auto [it, inserted] = origin_of.try_emplace(name, static_cast<std::uint16_t>(s.sources_.size()));
        if (inserted) s.sources_.push_back(name);
        return it->second;
    };
    auto pack = [](std::uint16_t o, std::uint32_t id) { return (std::uint64_t{o} << 32) | id; };

    s.entities_.reserve(graph.node_count());
    for (const auto& [key, entity] : graph.entities()) {
        const auto o = origin(key.source);
        s.entity_lookup_[pack(o, key.id)] = static_cast<Row>(s.entities_.size());
        s.entities_.push_back(entity);
        s.entity_origin_.push_back(o);
    }
    s.events_.reserve(graph.edge_count());
    for (const auto& [key, ev] : graph.events()) {
        const auto o = origin(key.source);
        s.event_lookup_[pack(o, key.id)] = static_cast<Row>(s.events_.size());
        s.events_.push_back(ev);
        s.event_origin_.push_back(o);
        s.src_.push_back(s.entity_lookup_.at(pack(o, ev.src)));
        s.dst_.push_back(s.entity_lookup_.at(pack(o, ev.dst)));
    }
    if (s.sources_.empty()) s.sources_.emplace_back();
    s.validate();
    s.build_indexes();
    return s;
}

Store Store::appended(std::vector<Entity> entities, std::vector<Event> events) const {
    if (!dense_ids_) throw ValidationError("cannot append to a graph view");
    std::vector<Entity> all_entities = entities_;
    all_entities.insert(all_entities.end(), std::make_move_iterator(entities.begin()),
                        std::make_move_iterator(entities.end()));
    std::vector<Event> all_events = events_;
    all_events.insert(all_events.end(), std::make_move_iterator(events.begin()),
                      std::make_move_iterator(events.end()));
    return Store(source(), std::move(all_entities), std::move(all_events));
}

void Store::validate() const {
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const Event& e = events_[i];
        if (src_[i] >= entities_.size() || dst_[i] >= entities_.size()) {
            throw ValidationError("event " + std::to_string(e.id) + " references a missing entity");
        }
        if (src_[i] == dst_[i]) {
            throw ValidationError("event " + std::to_string(e.id) + " is a self-loop");
        }
        if (e.start > e.end) {
            throw ValidationError("event " + std::to_string(e.id) + " ends before it starts");
        }
    }
}

void Store::build_indexes() {
    key_index_.clear();
    file_name_index_.clear();
    exename_index_.clear();
    srcip_index_.clear();
    dstip_index_.clear();
    for (auto& k : kind_index_) k.clear();
    for (auto& o : op_index_) o.clear();

    for (Row r = 0; r < entities_.size(); ++r) {
        const Entity& e = entities_[r];
        key_index_[e.key].push_back(r);
        kind_index_[static_cast<int>(e.kind())].push_back(r);
        if (const auto* f = e.file()) {
            file_name_index_[f->name].push_back(r);
        } else if (const auto* p = e.process()) {
            exename_index_[p->exename].push_back(r);
        } else if (const auto* n = e.network()) {
            srcip_index_[n->srcip].push_back(r);
            dstip_index_[n->dstip].push_back(r);
        }
    }
    for (Row r = 0; r < events_.size(); ++r) op_index_[static_cast<int>(events_[r].op)].push_back(r);

    const std::size_t n = entities_.size();
    auto build = [&](Csr& csr, const std::vector<Row>& endpoint, bool by_end) {
        csr.offsets.assign(n + 1, 0);
        for (Row r = 0; r < events_.size(); ++r) ++csr.offsets[endpoint[r] + 1];
        for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
        csr.rows.assign(events_.size(), 0);
        std::vector<std::uint32_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
        for (Row r = 0; r < events_.size(); ++r) csr.rows[cursor[endpoint[r]]++] = r;
        for (std::size_t i = 0; i < n; ++i) {
            auto first = csr.rows.begin() + csr.offsets[i];
            auto last = csr.rows.begin() + csr.offsets[i + 1];
            std::sort(first, last, [&](Row a, Row b) {
                const Nanos ta = by_end ? events_[a].end : events_[a].start;
                const Nanos tb = by_end ? events_[b].end : events_[b].start;
                return ta != tb ? ta < tb : a < b;
            });
        }
    };
    build(in_by_start_, dst_, false);
    build(out_by_start_, src_, false);
    build(out_by_end_, src_, true);
}

// ---------------------------------------------------------------------------
// Lookups
// ---------------------------------------------------------------------------

std::optional<Row> Store::find_entity(const std::string& source, EntityId id) const {
    if (dense_ids_) {
        if (source != sources_.front() || id >= entities_.size()) return std::nullopt;
        return id;
    }
    for (std::uint16_t o = 0; o < sources_.size(); ++o) {
        if (sources_[o] != source) continue;
        auto it = entity_lookup_.find((std::uint64_t{o} << 32) | id);
        if (it != entity_lookup_.end()) return it->second;
    }
    return std::nullopt;
}

std::optional<Row> Store::find_event(const std::string& source, EventId id) const {
    if (dense_ids_) {
        if (source != sources_.front() || id >= events_.size()) return std::nullopt;
        return id;
    }
    for (std::uint16_t o = 0; o < sources_.size(); ++o) {
        if (sources_[o] != source) continue;
        auto it = event_lookup_.find((std::uint64_t{o} << 32) | id);
        if (it != event_lookup_.end()) return it->second;
    }
    return std::nullopt;
}

std::vector<Row> Store::find_by_key(const std::string& key) const {
    auto it = key_index_.find(key);
    return it == key_index_.end() ? std::vector<Row>{} : it->second;
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

namespace {

void require_attrs(const Expr* pred, bool events) {
    for (Attr a : referenced_attrs(pred)) {
        if (events ? !is_event_attr(a) : !is_entity_attr(a)) {
            throw ValidationError(std::string("attribute '") + std::string(to_string(a)) + "' is not defined on " +
                                  (events ? "events" : "entities"));
        }
    }
}

bool in_window(const Event& e, const std::optional<TimeWindow>& w) {
    return !w || (e.start <= w->end && e.end >= w->begin);
}

const std::vector<Row> kEmptyRows;

}  // namespace

const std::vector<Row>* Store::posting_for(const Expr& cmp, bool* events) const {
    if (cmp.op != CmpOp::Eq || cmp.value.kind == Literal::Kind::Int) return nullptr;
    auto lookup = [&](const PostingMap& m) -> const std::vector<Row>* {
        auto it = m.find(cmp.value.text);
        return it == m.end() ? &kEmptyRows : &it->second;
    };
    if (events != nullptr) {
        if (cmp.attr != Attr::Optype) return nullptr;
        auto op = parse_op(cmp.value.text);
        *events = true;
        return op ? &op_index_[static_cast<int>(*op)] : &kEmptyRows;
    }
    switch (cmp.attr) {
        case Attr::ExeName: return lookup(exename_index_);
        case Attr::SrcIp: return lookup(srcip_index_);
        case Attr::DstIp: return lookup(dstip_index_);
        case Attr::Type: {
            auto kind = parse_entity_kind(cmp.value.text);
            return kind ? &kind_index_[static_cast<int>(*kind)] : &kEmptyRows;
        }
        default: return nullptr;
    }
}

std::optional<std::vector<Row>> Store::best_entity_candidates(std::optional<EntityKind> kind,
                                                              const Expr* pred) const {
    std::optional<std::vector<Row>> best;
    auto offer = [&](std::vector<Row> rows) {
        if (!best || rows.size() < best->size()) best = std::move(rows);
    };
    auto offer_ref = [&](const std::vector<Row>& rows) {
        if (!best || rows.size() < best->size()) best = rows;
    };
    if (kind) offer_ref(kind_index_[static_cast<int>(*kind)]);
    for (const Expr* c : top_conjuncts(pred)) {
        if (c->attr == Attr::Name && c->op == CmpOp::Eq && c->value.kind != Literal::Kind::Int) {
            // `name` covers file names and process executable names.
            std::vector<Row> rows;
            if (auto it = file_name_index_.find(c->value.text); it != file_name_index_.end()) rows = it->second;
            if (auto it = exename_index_.find(c->value.text); it != exename_index_.end()) {
                rows.insert(rows.end(), it->second.begin(), it->second.end());
            }
            std::sort(rows.begin(), rows.end());
            offer(std::move(rows));
        } else if (const auto* posting = posting_for(*c, nullptr)) {
            offer_ref(*posting);
        }
    }
    return best;
}

RowSet Store::scan_entities(std::optional<EntityKind> kind, const Expr* pred) const {
    require_attrs(pred, false);
    auto candidates = best_entity_candidates(kind, pred);
    if (!candidates) return scan_entities_linear(kind, pred);
    std::vector<Row> out;
    for (Row r : *candidates) {
        const Entity& e = entities_[r];
        if ((!kind || e.kind() == *kind) && eval_opt(pred, e)) out.push_back(r);
    }
    return RowSet(std::move(out));
}

RowSet Store::scan_entities_linear(std::optional<EntityKind> kind, const Expr* pred) const {
    require_attrs(pred, false);
    std::vector<Row> out;
    for (Row r = 0; r < entities_.size(); ++r) {
        const Entity& e = entities_[r];
        if ((!kind || e.kind() == *kind) && eval_opt(pred, e)) out.push_back(r);
    }
    return RowSet(std::move(out));
}

RowSet Store::scan_events(const Expr* pred, const RowSet* src_in, const RowSet* dst_in,
                          std::optional<TimeWindow> window) const {
    require_attrs(pred, true);
    if ((src_in && src_in->empty()) || (dst_in && dst_in->empty())) return {};

    auto degree_sum = [&](const RowSet& set, const Csr& csr) {
        std::size_t total = 0;
        for (Row r : set) total += csr.offsets[r + 1] - csr.offsets[r];
        return total;
    };

    enum class Path { Full, BySrc, ByDst, ByOp } path = Path::Full;
    std::size_t cost = events_.size();
    const std::vector<Row>* op_rows = nullptr;
    for (const Expr* c : top_conjuncts(pred)) {
        bool is_event = false;
        if (const auto* posting = posting_for(*c, &is_event); posting && posting->size() < cost) {
            op_rows = posting;
            cost = posting->size();
            path = Path::ByOp;
        }
    }
    if (src_in) {
        if (std::size_t c = degree_sum(*src_in, out_by_start_); c < cost) {
            cost = c;
            path = Path::BySrc;
        }
    }
    if (dst_in) {
        if (std::size_t c = degree_sum(*dst_in, in_by_start_); c < cost) {
            cost = c;
            path = Path::ByDst;
        }
    }

    std::vector<Row> out;
    auto consider = [&](Row r) {
        const Event& e = events_[r];
        if (src_in && !src_in->contains(src_[r])) return;
        if (dst_in && !dst_in->contains(dst_[r])) return;
        if (!in_window(e, window)) return;
        if (eval_opt(pred, e)) out.push_back(r);
    };
    switch (path) {
        case Path::Full:
            for (Row r = 0; r < events_.size(); ++r) consider(r);
            break;
        case Path::ByOp:
            for (Row r : *op_rows) consider(r);
            break;
        case Path::BySrc:
            for (Row s : *src_in) {
                for (Row r : out_by_start_.at(s)) consider(r);
            }
            break;
        case Path::ByDst:
            for (Row d : *dst_in) {
                for (Row r : in_by_start_.at(d)) consider(r);
            }
            break;
    }
    return RowSet(std::move(out));
}

RowSet Store::scan_events_linear(const Expr* pred, const RowSet* src_in, const RowSet* dst_in,
                                 std::optional<TimeWindow> window) const {
    require_attrs(pred, true);
    std::vector<Row> out;
    for (Row r = 0; r < events_.size(); ++r) {
        if (src_in && !src_in->contains(src_[r])) continue;
        if (dst_in && !dst_in->contains(dst_[r])) continue;
        if (!in_window(events_[r], window)) continue;
        if (eval_opt(pred, events_[r])) out.push_back(r);
    }
    return RowSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Adjacency
// ---------------------------------------------------------------------------

std::span<const Row> Store::in_edges(Row entity) const {
    if (entity >= entities_.size()) throw NotFoundError("unknown entity row " + std::to_string(entity));
    return in_by_start_.at(entity);
}

std::span<const Row> Store::out_edges(Row entity) const {
    if (entity >= entities_.size()) throw NotFoundError("unknown entity row " + std::to_string(entity));
    return out_by_start_.at(entity);
}

std::vector<Row> Store::neighbors(Row entity, Direction dir, std::optional<TimeBound> bound) const {
    std::span<const Row> list = dir == Direction::In ? in_edges(entity) : out_edges(entity);
    if (!bound) return {list.begin(), list.end()};
    if (bound->field == TimeBound::Field::Start && bound->cmp == TimeBound::Cmp::Less) {
        auto cut = std::partition_point(list.begin(), list.end(),
                                        [&](Row r) { return events_[r].start < bound->instant; });
        return {list.begin(), cut};
    }
    std::vector<Row> out;
    for (Row r : list) {
        if (bound->admits(events_[r])) out.push_back(r);
    }
    return out;
}

std::span<const Row> Store::in_started_before(Row entity, Nanos instant) const {
    auto list = in_edges(entity);
    auto cut = std::partition_point(list.begin(), list.end(), [&](Row r) { return events_[r].start < instant; });
    return {list.begin(), cut};
}

std::span<const Row> Store::out_ending_after(Row entity, Nanos instant) const {
    if (entity >= entities_.size()) throw NotFoundError("unknown entity row " + std::to_string(entity));
    auto list = out_by_end_.at(entity);
    auto cut = std::partition_point(list.begin(), list.end(), [&](Row r) { return events_[r].end <= instant; });
    return {cut, list.end()};
}

std::size_t Store::selectivity_count(const Expr* pred, bool events) const {
    if (events) {
        std::size_t best = events_.size();
        for (const Expr* c : top_conjuncts(pred)) {
            bool is_event = false;
            if (const auto* posting = posting_for(*c, &is_event)) best = std::min(best, posting->size());
        }
        return best;
    }
    auto candidates = best_entity_candidates(std::nullopt, pred);
    return candidates ? candidates->size() : entities_.size();
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

EventGraph Store::subgraph(std::span<const Row> events) const {
    EventGraph g;
    for (Row r : events) {
        g.add_entity(entity_source(src_[r]), entities_[src_[r]]);
        g.add_entity(entity_source(dst_[r]), entities_[dst_[r]]);
        g.add_event(event_source(r), events_[r]);
    }
    return g;
}

EventGraph Store::to_graph() const {
    EventGraph g;
    for (Row r = 0; r < entities_.size(); ++r) g.add_entity(entity_source(r), entities_[r]);
    for (Row r = 0; r < events_.size(); ++r) g.add_event(event_source(r), events_[r]);
    return g;
}

// ---------------------------------------------------------------------------
// Snapshot persistence
// ---------------------------------------------------------------------------
//
// Layout (little-endian):
//   "PQL1" u32 version
//   repeated sections: char tag[4], u64 length, payload
// Sections: META, ENTS, EVTS, IFNM, IEXE, ISIP, IDIP, AIN_, AOUT, AEND.

namespace {

constexpr char kMagic[4] = {'P', 'Q', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}
    bool done() const { return pos_ >= data_.size(); }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(data_[pos_++])} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(data_[pos_++])} << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw IngestError("snapshot truncated");
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

void write_section(std::ostream& out, const char (&tag)[5], const Writer& w) {
    out.write(tag, 4);
    Writer len;
    len.u64(w.data().size());
    out.write(len.data().data(), 8);
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
}

void write_entity(Writer& w, const Entity& e) {
    w.u32(e.id);
    w.u8(static_cast<std::uint8_t>(e.kind()));
    if (const auto* p = e.process()) {
        w.i64(p->pid);
        w.str(p->exename);
        w.str(p->exepath);
        w.str(p->user);
        w.str(p->group);
        w.str(p->cmdline);
    } else if (const auto* f = e.file()) {
        w.str(f->name);
        w.str(f->path);
        w.str(f->user);
        w.str(f->group);
    } else {
        const auto& n = std::get<NetworkAttrs>(e.attrs);
        w.str(n.srcip);
        w.i64(n.srcport);
        w.str(n.dstip);
        w.i64(n.dstport);
        w.str(n.protocol);
    }
}

Entity read_entity(Reader& r) {
    const EntityId id = r.u32();
    const auto kind = r.u8();
    switch (kind) {
        case 0: {
            ProcessAttrs p;
            p.pid = r.i64();
            p.exename = r.str();
            p.exepath = r.str();
            p.user = r.str();
            p.group = r.str();
            p.cmdline = r.str();
            return Entity(id, std::move(p));
        }
        case 1: {
            FileAttrs f;
            f.name = r.str();
            f.path = r.str();
            f.user = r.str();
            f.group = r.str();
            return Entity(id, std::move(f));
        }
        case 2: {
            NetworkAttrs n;
            n.srcip = r.str();
            n.srcport = r.i64();
            n.dstip = r.str();
            n.dstport = r.i64();
            n.protocol = r.str();
            return Entity(id, std::move(n));
        }
        default:
            throw IngestError("snapshot has unknown entity kind " + std::to_string(kind));
    }
}

}  // namespace

struct StoreCodec {
    static void write_postings(Writer& w, const Store::PostingMap& m) {
        std::map<std::string, const std::vector<Row>*> sorted;
        for (const auto& [k, v] : m) sorted.emplace(k, &v);
        w.u32(static_cast<std::uint32_t>(sorted.size()));
        for (const auto& [k, v] : sorted) {
            w.str(k);
            w.u32(static_cast<std::uint32_t>(v->size()));
            for (Row r : *v) w.u32(r);
        }
    }
    static Store::PostingMap read_postings(Reader& r) {
        Store::PostingMap m;
        const std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            std::string key = r.str();
            std::vector<Row> rows(r.u32());
            for (auto& row : rows) row = r.u32();
            m.emplace(std::move(key), std::move(rows));
        }
        return m;
    }
    static void write_csr(Writer& w, const Store::Csr& csr) {
        w.u32(static_cast<std::uint32_t>(csr.offsets.size()));
        for (auto o : csr.offsets) w.u32(o);
        w.u32(static_cast<std::uint32_t>(csr.rows.size()));
        for (auto x : csr.rows) w.u32(x);
    }
    static Store::Csr read_csr(Reader& r) {
        Store::Csr csr;
        csr.offsets.resize(r.u32());
        for (auto& o : csr.offsets) o = r.u32();
        csr.rows.resize(r.u32());
        for (auto& x : csr.rows) x = r.u32();
        return csr;
    }
};

void Store::save(std::ostream& out) const {
    if (!dense_ids_) throw ValidationError("only database snapshots can be saved");
    out.write(kMagic, 4);
    Writer header;
    header.u32(kVersion);
    out.write(header.data().data(), 4);

    Writer meta;
    meta.str(source());
    meta.u64(entities_.size());
    meta.u64(events_.size());
    write_section(out, "META", meta);

    Writer ents;
    for (const auto& e : entities_) write_entity(ents, e);
    write_section(out, "ENTS", ents);

    Writer evts;
    for (const auto& e : events_) {
        evts.u32(e.id);
        evts.u32(e.src);
        evts.u32(e.dst);
        evts.u8(static_cast<std::uint8_t>(e.op));
        evts.i64(e.start);
        evts.i64(e.end);
        evts.u64(e.amount);
        evts.u8(static_cast<std::uint8_t>(e.category));
        evts.str(e.note);
    }
    write_section(out, "EVTS", evts);

    auto postings = [&](const char (&tag)[5], const PostingMap& m) {
        Writer w;
        StoreCodec::write_postings(w, m);
        write_section(out, tag, w);
    };
    postings("IFNM", file_name_index_);
    postings("IEXE", exename_index_);
    postings("ISIP", srcip_index_);
    postings("IDIP", dstip_index_);
    auto csr = [&](const char (&tag)[5], const Csr& c) {
        Writer w;
        StoreCodec::write_csr(w, c);
        write_section(out, tag, w);
    };
    csr("AIN_", in_by_start_);
    csr("AOUT", out_by_start_);
    csr("AEND", out_by_end_);
    if (!out) throw Error("failed writing snapshot");
}

Store Store::load(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 8 || std::memcmp(data.data(), kMagic, 4) != 0) {
        throw IngestError("not a PQL1 snapshot");
    }
    Reader top(std::string_view(data).substr(4));
    if (const auto version = top.u32(); version != kVersion) {
        throw IngestError("unsupported snapshot version " + std::to_string(version));
    }
    std::string_view rest = std::string_view(data).substr(8);

    std::string source;
    std::vector<Entity> entities;
    std::vector<Event> events;
    std::map<std::string, std::string_view> sections;
    while (!rest.empty()) {
        if (rest.size() < 12) throw IngestError("snapshot truncated");
        std::string tag(rest.substr(0, 4));
        Reader lenr(rest.substr(4, 8));
        const std::uint64_t len = lenr.u64();
        if (rest.size() < 12 + len) throw IngestError("snapshot section " + tag + " truncated");
        sections[tag] = rest.substr(12, len);
        rest = rest.substr(12 + len);
    }
    for (const char* required : {"META", "ENTS", "EVTS"}) {
        if (!sections.count(required)) throw IngestError(std::string("snapshot missing section ") + required);
    }
    Reader meta(sections["META"]);
    source = meta.str();
    const auto n_entities = meta.u64();
    const auto n_events = meta.u64();

    Reader ents(sections["ENTS"]);
    entities.reserve(n_entities);
    for (std::uint64_t i = 0; i < n_entities; ++i) entities.push_back(read_entity(ents));

    Reader evts(sections["EVTS"]);
    events.reserve(n_events);
    for (std::uint64_t i = 0; i < n_events; ++i) {
        Event e;
        e.id = evts.u32();
        e.src = evts.u32();
        e.dst = evts.u32();
        const auto op = evts.u8();
        if (op >= kOpCount) throw IngestError("snapshot has unknown optype");
        e.op = static_cast<Op>(op);
        e.start = evts.i64();
        e.end = evts.i64();
        e.amount = evts.u64();
        e.category = static_cast<EventCategory>(evts.u8());
        e.note = evts.str();
        events.push_back(std::move(e));
    }

    Store s(std::move(source), std::move(entities), std::move(events));

    // Persisted indexes must agree with the tables they were saved with.
    auto check_postings = [&](const char* tag, const PostingMap& rebuilt) {
        if (!sections.count(tag)) return;
        Reader r(sections[tag]);
        if (StoreCodec::read_postings(r) != rebuilt) throw IngestError(std::string("snapshot index ") + tag + " is corrupt");
    };
    auto check_csr = [&](const char* tag, const Csr& rebuilt) {
        if (!sections.count(tag)) return;
        Reader r(sections[tag]);
        Csr c = StoreCodec::read_csr(r);
        if (c.offsets != rebuilt.offsets || c.rows != rebuilt.rows) {
            throw IngestError(std::string("snapshot adjacency ") + tag + " is corrupt");
        }
    };
    check_postings("IFNM", s.file_name_index_);
    check_postings("IEXE", s.exename_index_);
    check_postings("ISIP", s.srcip_index_);
    check_postings("IDIP", s.dstip_index_);
    check_csr("AIN_", s.in_by_start_);
    check_csr("AOUT", s.out_by_start_);
    check_csr("AEND", s.out_by_end_);
    return s;
}

void Store::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    save(out);
}

Store Store::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open snapshot " + path);
    return load(in);
}

// ---------------------------------------------------------------------------
// Database
// ---------------------------------------------------------------------------

Database::Database(std::string name)
    : name_(name), current_(std::make_shared<const Store>(std::move(name), std::vector<Entity>{}, std::vector<Event>{})) {}

Database::Database(Store initial)
    : name_(initial.source()), current_(std::make_shared<const Store>(std::move(initial))) {}

std::shared_ptr<const Store> Database::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return current_;
}

void Database::replace(std::shared_ptr<const Store> next) {
    std::lock_guard<std::mutex> lock(mutex_);
    current_ = std::move(next);
}

}  // namespace provql
