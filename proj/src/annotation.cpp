#include "favor/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "favor/errors.hpp"
#include "favor/text.hpp"

using nlohmann::json;

namespace favor {

namespace {

constexpr double kDurationTolerance = 0.5;  // seconds; annotations are quantized

const char* const kKnownRecordFields[] = {"video_id", "duration", "caption", "camera_motions",
                                          "subjects"};

TimedMotion motion_from_json(const json& j, const std::string& video_id, const std::string& where) {
    if (!j.is_object() || !j.contains("description") || !j.contains("start") || !j.contains("end"))
        throw ValidationError("record '" + video_id + "': " + where +
                              " must be an object with description/start/end");
    TimedMotion m;
    m.description = j.at("description").get<std::string>();
    m.start = j.at("start").get<double>();
    m.end = j.at("end").get<double>();
    if (text::trim(m.description).empty())
        throw ValidationError("record '" + video_id + "': " + where + ".description is empty");
    if (m.start < 0.0 || m.end < 0.0)
        throw ValidationError("record '" + video_id + "': " + where + " has a negative time");
    if (m.start > m.end)
        throw ValidationError("record '" + video_id + "': " + where + " violates start <= end (" +
                              std::to_string(m.start) + " > " + std::to_string(m.end) + ")");
    return m;
}

void sort_by_start(std::vector<TimedMotion>& motions) {
    std::stable_sort(motions.begin(), motions.end(),
                     [](const TimedMotion& a, const TimedMotion& b) { return a.start < b.start; });
}

json motion_to_json(const TimedMotion& m) {
    return json{{"description", m.description}, {"start", m.start}, {"end", m.end}};
}

}  // namespace

std::vector<AnnotationRecord> load_annotations(std::istream& source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("annotation file is not valid JSON: ") + e.what(), e.byte);
    }
    if (!root.is_array()) throw ValidationError("annotation file must be a top-level JSON array");

    std::vector<AnnotationRecord> records;
    records.reserve(root.size());
    std::map<std::string, bool> seen_ids;

    for (const json& jr : root) {
        if (!jr.is_object()) throw ValidationError("annotation records must be JSON objects");
        AnnotationRecord rec;
        if (!jr.contains("video_id") || !jr.at("video_id").is_string())
            throw ValidationError("annotation record is missing a string 'video_id'");
        rec.video_id = jr.at("video_id").get<std::string>();
        if (seen_ids.count(rec.video_id))
            throw ValidationError("record '" + rec.video_id + "': duplicate video_id");
        seen_ids[rec.video_id] = true;

        if (jr.contains("duration") && !jr.at("duration").is_null()) {
            rec.duration = jr.at("duration").get<double>();
            if (*rec.duration <= 0.0)
                throw ValidationError("record '" + rec.video_id + "': duration must be positive");
        }
        if (jr.contains("caption")) rec.caption = jr.at("caption").get<std::string>();

        if (jr.contains("camera_motions")) {
            const json& cams = jr.at("camera_motions");
            if (!cams.is_array())
                throw ValidationError("record '" + rec.video_id + "': camera_motions must be an array");
            for (std::size_t i = 0; i < cams.size(); ++i)
                rec.camera_motions.push_back(
                    motion_from_json(cams[i], rec.video_id, "camera_motions[" + std::to_string(i) + "]"));
            sort_by_start(rec.camera_motions);
        }

        if (jr.contains("subjects")) {
            const json& subs = jr.at("subjects");
            if (!subs.is_array())
                throw ValidationError("record '" + rec.video_id + "': subjects must be an array");
            for (std::size_t si = 0; si < subs.size(); ++si) {
                const json& js = subs[si];
                SubjectAnnotation sub;
                if (!js.is_object() || !js.contains("name"))
                    throw ValidationError("record '" + rec.video_id + "': subjects[" +
                                          std::to_string(si) + "] must be an object with 'name'");
                sub.name = js.at("name").get<std::string>();
                if (text::trim(sub.name).empty())
                    throw ValidationError("record '" + rec.video_id + "': subjects[" +
                                          std::to_string(si) + "].name is empty");
                if (js.contains("attributes")) {
                    for (const json& a : js.at("attributes"))
                        sub.attributes.push_back(a.get<std::string>());
                    if (sub.attributes.size() > 3)
                        throw ValidationError("record '" + rec.video_id + "': subject '" + sub.name +
                                              "' has " + std::to_string(sub.attributes.size()) +
                                              " attributes (limit is 3)");
                }
                if (js.contains("motions")) {
                    const json& ms = js.at("motions");
                    for (std::size_t mi = 0; mi < ms.size(); ++mi)
                        sub.motions.push_back(motion_from_json(
                            ms[mi], rec.video_id,
                            "subject '" + sub.name + "' motions[" + std::to_string(mi) + "]"));
                    sort_by_start(sub.motions);
                }
                rec.subjects.push_back(std::move(sub));
            }
        }

        if (rec.duration) {
            auto check_bound = [&](const TimedMotion& m, const std::string& where) {
                if (m.end > *rec.duration + kDurationTolerance)
                    throw ValidationError("record '" + rec.video_id + "': " + where + " ends at " +
                                          std::to_string(m.end) + "s, beyond duration " +
                                          std::to_string(*rec.duration) + "s");
            };
            for (const auto& m : rec.camera_motions) check_bound(m, "camera motion");
            for (const auto& s : rec.subjects)
                for (const auto& m : s.motions) check_bound(m, "subject '" + s.name + "' motion");
        }

        // Preserve unknown fields so serialize(load(x)) round-trips.
        json extra = json::object();
        for (auto it = jr.begin(); it != jr.end(); ++it) {
            bool known = false;
            for (const char* k : kKnownRecordFields)
                if (it.key() == k) { known = true; break; }
            if (!known) extra[it.key()] = it.value();
        }
        if (!extra.empty()) rec.extra_json = extra.dump();

        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<AnnotationRecord> load_annotations_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open annotation file: " + path);
    return load_annotations(in);
}

std::string serialize_annotations(const std::vector<AnnotationRecord>& records) {
    json root = json::array();
    for (const auto& rec : records) {
        json jr;
        jr["video_id"] = rec.video_id;
        if (rec.duration) jr["duration"] = *rec.duration;
        jr["caption"] = rec.caption;
        jr["camera_motions"] = json::array();
        for (const auto& m : rec.camera_motions) jr["camera_motions"].push_back(motion_to_json(m));
        jr["subjects"] = json::array();
        for (const auto& s : rec.subjects) {
            json js;
            js["name"] = s.name;
            js["attributes"] = s.attributes;
            js["motions"] = json::array();
            for (const auto& m : s.motions) js["motions"].push_back(motion_to_json(m));
            jr["subjects"].push_back(std::move(js));
        }
        if (!rec.extra_json.empty()) {
            json extra = json::parse(rec.extra_json);
            for (auto it = extra.begin(); it != extra.end(); ++it) jr[it.key()] = it.value();
        }
        root.push_back(std::move(jr));
    }
    return root.dump(2);
}

std::vector<TemporalElement> build_temporal_sequence(const AnnotationRecord& record) {
    struct Entry {
        double start;
        std::size_t subject;
        std::size_t motion;
        const std::string* action;
    };
    std::vector<Entry> entries;
    for (std::size_t si = 0; si < record.subjects.size(); ++si) {
        const auto& motions = record.subjects[si].motions;
        for (std::size_t mi = 0; mi < motions.size(); ++mi)
            entries.push_back({motions[mi].start, si, mi, &motions[mi].description});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.subject != b.subject) return a.subject < b.subject;
        return a.motion < b.motion;
    });
    std::vector<TemporalElement> out;
    out.reserve(entries.size());
    for (const auto& e : entries)
        out.push_back({static_cast<int>(e.subject), *e.action});
    return out;
}

StructuredMotion reference_structure(const AnnotationRecord& record) {
    StructuredMotion sm;
    for (const auto& m : record.camera_motions) sm.camera_sequence.push_back(m.description);
    for (const auto& s : record.subjects) {
        StructuredSubject sub;
        sub.identity = s.name;
        sub.attributes = s.attributes;
        for (const auto& m : s.motions) sub.actions.push_back(m.description);
        sm.subjects.push_back(std::move(sub));
    }
    sm.temporal_sequence = build_temporal_sequence(record);
    return sm;
}

std::string structured_to_json(const StructuredMotion& sm) {
    json j;
    j["camera_sequence"] = sm.camera_sequence;
    j["subjects"] = json::array();
    for (const auto& s : sm.subjects)
        j["subjects"].push_back(
            json{{"identity", s.identity}, {"attributes", s.attributes}, {"actions", s.actions}});
    j["temporal_sequence"] = json::array();
    for (const auto& t : sm.temporal_sequence)
        j["temporal_sequence"].push_back(json{{"subject", t.subject}, {"action", t.action}});
    return j.dump();
}

StructuredMotion structured_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("structured motion is not valid JSON: ") + e.what(), e.byte);
    }
    StructuredMotion sm;
    if (j.contains("camera_sequence"))
        for (const json& c : j.at("camera_sequence")) sm.camera_sequence.push_back(c.get<std::string>());
    if (j.contains("subjects")) {
        for (const json& js : j.at("subjects")) {
            StructuredSubject s;
            s.identity = js.value("identity", std::string());
            if (js.contains("attributes"))
                for (const json& a : js.at("attributes")) s.attributes.push_back(a.get<std::string>());
            if (js.contains("actions"))
                for (const json& a : js.at("actions")) s.actions.push_back(a.get<std::string>());
            sm.subjects.push_back(std::move(s));
        }
    }
    if (j.contains("temporal_sequence")) {
        for (const json& jt : j.at("temporal_sequence")) {
            TemporalElement t;
            t.subject = jt.value("subject", -1);
            t.action = jt.value("action", std::string());
            if (t.subject < -1 || t.subject >= static_cast<int>(sm.subjects.size()))
                throw ValidationError("temporal_sequence references subject index " +
                                      std::to_string(t.subject) + " out of range");
            sm.temporal_sequence.push_back(std::move(t));
        }
    }
    return sm;
}

}  // namespace favor
