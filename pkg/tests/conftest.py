from tagnet import TaggingEvent, build_network


def ev(user, item, *tags):
    return TaggingEvent(user, item, tuple(tags))


def net_of(*events):
    return build_network(list(events))
