"""
Ordered record of one protocol execution and its line-delimited codec.

Wire format, one event per line, UTF-8, every line ends with a newline:

    {"seq":0,"phase":"setup","actor":"protocol","payload":{...}}

Top-level fields always appear in the order seq, phase, actor, payload.
Payload keys are sorted, separators are compact and values are JSON
integers, strings, booleans, null, lists or objects. `seq` counts from 0
without gaps, phases never go backwards and the last event is the outcome.
Any other byte sequence is rejected.
"""
import json
from dataclasses import dataclass, field

from .exceptions import TranscriptParseError

SETUP = 'setup'
CKS = 'cks'
CHECK = 'check'
ENCODE = 'encode'
VERIFY = 'verify'
OUTCOME = 'outcome'

PHASES = (SETUP, CKS, CHECK, ENCODE, VERIFY, OUTCOME)

PROTOCOL = 'protocol'
ACTORS = ('alice', 'bob', PROTOCOL)

FIELDS = ['seq', 'phase', 'actor', 'payload']


@dataclass(frozen=True)
class TranscriptEvent:
    seq: int
    phase: str
    actor: str
    payload: dict = field(default_factory=dict)

    def encode(self):
        return '{{"seq":{seq},"phase":{phase},"actor":{actor},"payload":{payload}}}'.format(
            seq=self.seq,
            phase=json.dumps(self.phase, ensure_ascii=False),
            actor=json.dumps(self.actor, ensure_ascii=False),
            payload=json.dumps(
                self.payload,
                sort_keys=True,
                separators=(',', ':'),
                ensure_ascii=False,
            ),
        )


class ProtocolTranscript:

    def __init__(self, events=None):
        self.events = []
        for event in events or []:
            self._append(event)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __eq__(self, other):
        return isinstance(other, ProtocolTranscript) and self.events == other.events

    def __repr__(self):
        return '<ProtocolTranscript events={count}>'.format(count=len(self.events))

    def _append(self, event):
        if event.phase not in PHASES:
            raise ValueError("Unknown phase '{phase}'.".format(phase=event.phase))
        if event.actor not in ACTORS:
            raise ValueError("Unknown actor '{actor}'.".format(actor=event.actor))
        if event.seq != len(self.events):
            raise ValueError('Event seq {seq} should be {expected}.'.format(
                seq=event.seq,
                expected=len(self.events),
            ))
        if self.events and PHASES.index(event.phase) < PHASES.index(self.events[-1].phase):
            raise ValueError("Phase '{phase}' cannot follow '{last}'.".format(
                phase=event.phase,
                last=self.events[-1].phase,
            ))
        self.events.append(event)
        return event

    def add(self, phase, actor, **payload):
        return self._append(TranscriptEvent(len(self.events), phase, actor, payload))

    def of_type(self, kind, phase=None):
        return [
            e for e in self.events
            if e.payload.get('type') == kind and (phase is None or e.phase == phase)
        ]

    @property
    def setup(self):
        return self.events[0] if self.events else None

    @property
    def outcome(self):
        if self.events and self.events[-1].phase == OUTCOME:
            return self.events[-1]
        return None

    def encode(self):
        return encode(self)


def encode(transcript):
    """
    Returns the canonical bytes of `transcript`.
    """
    return ''.join(event.encode() + '\n' for event in transcript.events).encode('utf-8')


def _reject_duplicates(pairs):
    keys = [key for key, _ in pairs]
    if len(set(keys)) != len(keys):
        raise ValueError('duplicate key')
    return dict(pairs)


def parse(data):
    """
    Returns the ProtocolTranscript of canonical transcript bytes.
    """
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        line = data[:e.start].count(b'\n') + 1
        raise TranscriptParseError('Invalid UTF-8', line, 1, e.start)
    if not text:
        raise TranscriptParseError('Empty transcript', 1, 1, 0)
    if not text.endswith('\n'):
        line = text.count('\n') + 1
        raise TranscriptParseError(
            'Truncated transcript, last line has no newline',
            line,
            len(text) - text.rfind('\n'),
            len(text.encode('utf-8')),
        )
    transcript = ProtocolTranscript()
    offset = 0
    for number, line in enumerate(text[:-1].split('\n'), start=1):
        start = offset
        offset += len(line.encode('utf-8')) + 1
        try:
            obj = json.loads(line, object_pairs_hook=_reject_duplicates)
        except json.JSONDecodeError as e:
            raise TranscriptParseError(e.msg, number, e.colno, start)
        except ValueError as e:
            raise TranscriptParseError(str(e), number, 1, start)
        if not isinstance(obj, dict) or list(obj) != FIELDS:
            raise TranscriptParseError(
                'Event fields should be {fields}'.format(fields=', '.join(FIELDS)),
                number, 1, start,
            )
        if not isinstance(obj['seq'], int) or isinstance(obj['seq'], bool) or not isinstance(obj['payload'], dict):
            raise TranscriptParseError('Malformed event', number, 1, start)
        event = TranscriptEvent(obj['seq'], obj['phase'], obj['actor'], obj['payload'])
        if event.encode() != line:
            raise TranscriptParseError('Event is not in canonical form', number, 1, start)
        try:
            transcript._append(event)
        except ValueError as e:
            raise TranscriptParseError(str(e), number, 1, start)
    if transcript.outcome is None:
        raise TranscriptParseError(
            'Transcript should end with an outcome event',
            len(transcript), 1, offset,
        )
    return transcript
