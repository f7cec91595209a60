#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace favor {

// One motion of a subject or of the camera, with its time span in seconds.
struct TimedMotion {
    std::string description;
    double start = 0.0;
    double end = 0.0;
};

struct SubjectAnnotation {
    std::string name;
    std::vector<std::string> attributes;  // at most 3
    std::vector<TimedMotion> motions;     // sorted by start, ties in file order
};

// Ground truth for one video: subjects with attributes and timed motion
// lists, camera motions, and the overall caption.
struct AnnotationRecord {
    std::string video_id;
    std::optional<double> duration;
    std::string caption;
    std::vector<SubjectAnnotation> subjects;
    std::vector<TimedMotion> camera_motions;  // sorted by start
    std::string extra_json;  // unknown top-level fields, preserved for round-trips
};

struct StructuredSubject {
    std::string identity;
    std::vector<std::string> attributes;
    std::vector<std::string> actions;  // ordered
};

struct TemporalElement {
    int subject = -1;  // index into subjects; -1 when the owner is unknown
    std::string action;
};

// Language-independent structured form of motion content. Produced both from
// annotations and from parsed model responses; empty lists are valid.
struct StructuredMotion {
    std::vector<std::string> camera_sequence;
    std::vector<StructuredSubject> subjects;
    std::vector<TemporalElement> temporal_sequence;
};

// Loads and validates the JSON annotation container. Throws ParseError with
// byte/line position on malformed input and ValidationError naming the
// video_id and field on invariant violations. Motions are stable-sorted by
// start time; records keep file order.
std::vector<AnnotationRecord> load_annotations(std::istream& source);
std::vector<AnnotationRecord> load_annotations_file(const std::string& path);

std::string serialize_annotations(const std::vector<AnnotationRecord>& records);

// All subjects' motions merged into one list ordered by start time; ties
// break by subject position in the record, then by motion position.
std::vector<TemporalElement> build_temporal_sequence(const AnnotationRecord& record);

// The reference StructuredMotion the scorer consumes.
StructuredMotion reference_structure(const AnnotationRecord& record);

std::string structured_to_json(const StructuredMotion& sm);
StructuredMotion structured_from_json(const std::string& json_text);

}  // namespace favor
